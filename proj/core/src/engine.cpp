#include "psfa/engine.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "psfa/errors.hpp"
#include "psfa/numerics.hpp"
#include "psfa/parallel.hpp"

namespace psfa {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)
constexpr double kMonotoneSlack = 1e-8;            // relative ELBO decrease tolerated

double parallel_sum(Index n, int threads, const std::function<double(Index)>& term) {
    std::vector<double> partial(static_cast<std::size_t>(chunk_count(n)), 0.0);
    parallel_for_chunks(n, threads, [&](Index c, Index begin, Index end) {
        double acc = 0.0;
        for (Index i = begin; i < end; ++i) acc += term(i);
        partial[static_cast<std::size_t>(c)] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

// sum_v sigma_A[v] * weight(v), reduced in fixed chunk order.
Matrix weighted_sigma_sum(const VariationalState& state, const Vector& weight,
                          int threads) {
    const Index v_count = state.voxel_count();
    const Index d = state.component_count();
    std::vector<Matrix> partial(static_cast<std::size_t>(chunk_count(v_count)));
    parallel_for_chunks(v_count, threads, [&](Index c, Index begin, Index end) {
        Matrix acc = Matrix::Zero(d, d);
        for (Index v = begin; v < end; ++v) {
            acc += weight(v) * state.sigma_A[static_cast<std::size_t>(v)];
        }
        partial[static_cast<std::size_t>(c)] = std::move(acc);
    });
    Matrix total = Matrix::Zero(d, d);
    for (const auto& p : partial) total += p;
    return total;
}

Matrix tau_mean_matrix(const VariationalState& state) {
    Matrix m(state.tau_rate.rows(), state.tau_rate.cols());
    for (Index b = 0; b < m.cols(); ++b) {
        m.col(b) = state.tau_shape(b) * state.tau_rate.col(b).cwiseInverse();
    }
    return m;
}

void check_dataset_state(const VariationalState& state, const Dataset& ds,
                         const char* where) {
    if (state.voxel_count() != ds.voxel_count() ||
        state.subject_count() != ds.subject_count()) {
        throw DimensionMismatch(std::string(where) + ": state does not match dataset");
    }
    for (Index b = 0; b < ds.subject_count(); ++b) {
        if (state.timepoints(b) != ds.timepoints(b)) {
            throw DimensionMismatch(std::string(where) +
                                    ": timepoint count mismatch for subject " +
                                    std::to_string(b));
        }
    }
}

}  // namespace

void FitOptions::validate() const {
    if (components < 1) throw InvalidParameter("FitOptions: components must be >= 1");
    if (max_iters < 1) throw InvalidParameter("FitOptions: max_iters must be >= 1");
    if (!(rel_tol > 0.0)) throw InvalidParameter("FitOptions: rel_tol must be > 0");
    if (restarts < 1) throw InvalidParameter("FitOptions: restarts must be >= 1");
    if (elbo_every < 1) throw InvalidParameter("FitOptions: elbo_every must be >= 1");
    hyper.validate();
}

Matrix back_reconstruct(const Matrix& a, const Matrix& x) {
    if (a.rows() != x.rows()) {
        throw DimensionMismatch("back_reconstruct: row counts differ");
    }
    const Matrix gram = a.transpose() * a;
    return pd_factorize(gram).solve(a.transpose() * x);
}

VariationalState initialize(const Dataset& ds, const FitOptions& opts, SeededRng& rng) {
    opts.validate();
    const Index v_count = ds.voxel_count();
    const Index b_count = ds.subject_count();
    const Index d = opts.components;

    for (int attempt = 0; attempt < 5; ++attempt) {
        Matrix ma(v_count, d);
        for (Index j = 0; j < d; ++j) {
            for (Index i = 0; i < v_count; ++i) ma(i, j) = rng.normal();
        }
        std::vector<Matrix> mu_s;
        mu_s.reserve(static_cast<std::size_t>(b_count));
        bool ok = true;
        try {
            const SymmetricPDFactor gram = pd_factorize(ma.transpose() * ma);
            for (Index b = 0; b < b_count; ++b) {
                Matrix s = gram.solve(ma.transpose() * ds.data(b));
                if (!s.allFinite()) {
                    ok = false;
                    break;
                }
                mu_s.push_back(std::move(s));
            }
        } catch (const NotPositiveDefinite&) {
            ok = false;
        }
        if (!ok) continue;

        VariationalState state;
        state.mu_A = std::move(ma);
        state.sigma_A.assign(static_cast<std::size_t>(v_count), Matrix::Identity(d, d));
        state.mu_S = std::move(mu_s);
        state.sigma_S.assign(static_cast<std::size_t>(b_count), Matrix::Identity(d, d));
        state.alpha_shape = opts.hyper.a_alpha;
        state.alpha_rate = Matrix::Constant(v_count, d, opts.hyper.b_alpha);
        state.gamma_shape = opts.hyper.a_gamma;
        state.gamma_rate = Vector::Constant(d, opts.hyper.b_gamma);
        state.tau_shape = Vector::Constant(b_count, opts.hyper.a_tau);
        state.tau_rate = Matrix::Constant(v_count, b_count, opts.hyper.b_tau);
        if (opts.model_mean) {
            state.mu_mu = Matrix::Zero(v_count, b_count);
            state.sigma_mu_diag = Matrix::Ones(v_count, b_count);
        }
        return state;
    }
    throw SingularInitialization("initialize: normal equations unsolvable after 5 draws");
}

Matrix expected_SSt(const VariationalState& state, Index b) {
    const Matrix& mu = state.mu_S[static_cast<std::size_t>(b)];
    const double t_b = static_cast<double>(mu.cols());
    return mu * mu.transpose() + t_b * state.sigma_S[static_cast<std::size_t>(b)];
}

void update_spatial_maps(VariationalState& state, const Dataset& ds, int threads) {
    check_dataset_state(state, ds, "update_spatial_maps");
    const Index v_count = state.voxel_count();
    const Index d = state.component_count();
    const Index b_count = state.subject_count();

    const Matrix tau = tau_mean_matrix(state);
    std::vector<Matrix> sst(static_cast<std::size_t>(b_count));
    std::vector<Matrix> proj(static_cast<std::size_t>(b_count));  // <S> X^T, D x V
    std::vector<Vector> row_sum(static_cast<std::size_t>(b_count));
    for (Index b = 0; b < b_count; ++b) {
        const Matrix& mu_s = state.mu_S[static_cast<std::size_t>(b)];
        sst[static_cast<std::size_t>(b)] = expected_SSt(state, b);
        proj[static_cast<std::size_t>(b)] = mu_s * ds.data(b).transpose();
        row_sum[static_cast<std::size_t>(b)] = mu_s.rowwise().sum();
    }

    parallel_for_chunks(v_count, threads, [&](Index, Index begin, Index end) {
        Matrix prec(d, d);
        Vector rhs(d);
        for (Index v = begin; v < end; ++v) {
            prec.setZero();
            prec.diagonal() =
                state.alpha_shape * state.alpha_rate.row(v).cwiseInverse();
            rhs.setZero();
            for (Index b = 0; b < b_count; ++b) {
                const double w = tau(v, b);
                prec += w * sst[static_cast<std::size_t>(b)];
                rhs += w * proj[static_cast<std::size_t>(b)].col(v);
                if (state.models_mean()) {
                    rhs -= w * state.mu_mu(v, b) * row_sum[static_cast<std::size_t>(b)];
                }
            }
            const SymmetricPDFactor f = pd_factorize(prec);
            state.sigma_A[static_cast<std::size_t>(v)] = f.inverse();
            state.mu_A.row(v) = f.solve(rhs).transpose();
        }
    });
}

void update_time_courses(VariationalState& state, const Dataset& ds, int threads) {
    check_dataset_state(state, ds, "update_time_courses");
    const Index b_count = state.subject_count();
    const Index d = state.component_count();
    const Matrix tau = tau_mean_matrix(state);
    const Vector gamma_mean = state.gamma_shape * state.gamma_rate.cwiseInverse();

    for (Index b = 0; b < b_count; ++b) {
        // <A^T diag(tau) A> = sum_v tau_v Sigma_A^v + <A>^T diag(tau) <A>
        Matrix prec = weighted_sigma_sum(state, tau.col(b), threads);
        prec.noalias() +=
            state.mu_A.transpose() * tau.col(b).asDiagonal() * state.mu_A;
        prec.diagonal() += gamma_mean;

        const SymmetricPDFactor f = pd_factorize(prec);
        state.sigma_S[static_cast<std::size_t>(b)] = f.inverse();

        Matrix weighted = tau.col(b).asDiagonal() * ds.data(b);
        if (state.models_mean()) {
            weighted.noalias() -=
                tau.col(b).cwiseProduct(state.mu_mu.col(b)) *
                Matrix::Ones(1, ds.timepoints(b));
        }
        state.mu_S[static_cast<std::size_t>(b)] =
            f.solve(state.mu_A.transpose() * weighted);
    }
}

void update_subject_means(VariationalState& state, const Dataset& ds,
                          const Hyperparameters& hyper, MuCovForm form) {
    check_dataset_state(state, ds, "update_subject_means");
    if (!state.models_mean()) {
        throw InvalidParameter("update_subject_means: mean modeling is disabled");
    }
    const Matrix tau = tau_mean_matrix(state);
    for (Index b = 0; b < state.subject_count(); ++b) {
        const double scale =
            form == MuCovForm::PerTimepoint ? static_cast<double>(ds.timepoints(b)) : 1.0;
        state.sigma_mu_diag.col(b) =
            (hyper.beta + scale * tau.col(b).array()).inverse().matrix();
        const Vector residual =
            ds.data(b).rowwise().sum() -
            state.mu_A * state.mu_S[static_cast<std::size_t>(b)].rowwise().sum();
        state.mu_mu.col(b) = state.sigma_mu_diag.col(b)
                                 .cwiseProduct(tau.col(b))
                                 .cwiseProduct(residual);
    }
}

void update_alpha(VariationalState& state, const Hyperparameters& hyper,
                  AlphaRateForm form) {
    const double weight = form == AlphaRateForm::Halved ? 0.5 : 1.0;
    state.alpha_shape = hyper.a_alpha + 0.5;
    for (Index d = 0; d < state.component_count(); ++d) {
        for (Index v = 0; v < state.voxel_count(); ++v) {
            state.alpha_rate(v, d) = hyper.b_alpha + weight * state.second_moment_A(v, d);
        }
    }
}

void update_gamma(VariationalState& state, const Hyperparameters& hyper) {
    Index total_t = 0;
    Vector trace_sum = Vector::Zero(state.component_count());
    for (Index b = 0; b < state.subject_count(); ++b) {
        total_t += state.timepoints(b);
        trace_sum += expected_SSt(state, b).diagonal();
    }
    state.gamma_shape = hyper.a_gamma + 0.5 * static_cast<double>(total_t);
    state.gamma_rate = (hyper.b_gamma + 0.5 * trace_sum.array()).matrix();
}

Matrix expected_residual_sq(const VariationalState& state, const Dataset& ds,
                            int threads) {
    check_dataset_state(state, ds, "expected_residual_sq");
    const Index v_count = state.voxel_count();
    const Index b_count = state.subject_count();
    Matrix residual(v_count, b_count);

    for (Index b = 0; b < b_count; ++b) {
        const Matrix& x = ds.data(b);
        const double t_b = static_cast<double>(x.cols());
        const Matrix sst = expected_SSt(state, b);
        const Matrix proj = state.mu_S[static_cast<std::size_t>(b)] * x.transpose();
        const Vector s_row_sum = state.mu_S[static_cast<std::size_t>(b)].rowwise().sum();
        const Vector x_sq = x.rowwise().squaredNorm();
        const Vector x_sum = x.rowwise().sum();

        parallel_for_chunks(v_count, threads, [&](Index, Index begin, Index end) {
            for (Index v = begin; v < end; ++v) {
                const auto a = state.mu_A.row(v);
                double r = x_sq(v);
                r -= 2.0 * a.dot(proj.col(v));
                r += sst.cwiseProduct(state.sigma_A[static_cast<std::size_t>(v)]).sum();
                r += a * sst * a.transpose();
                if (state.models_mean()) {
                    const double m = state.mu_mu(v, b);
                    r += t_b * state.second_moment_mu(v, b);
                    r -= 2.0 * m * x_sum(v);
                    r += 2.0 * a.dot(s_row_sum) * m;
                }
                residual(v, b) = r;
            }
        });
    }
    return residual;
}

void update_noise(VariationalState& state, const Dataset& ds,
                  const Hyperparameters& hyper, int threads) {
    const Matrix residual = expected_residual_sq(state, ds, threads);
    for (Index b = 0; b < state.subject_count(); ++b) {
        state.tau_shape(b) = hyper.a_tau + 0.5 * static_cast<double>(ds.timepoints(b));
    }
    state.tau_rate = (hyper.b_tau + 0.5 * residual.array()).matrix();
    if (!state.tau_rate.allFinite() || (state.tau_rate.array() <= 0.0).any()) {
        throw NonPositiveRate("update_noise: non-positive Gamma rate; upstream moments corrupt");
    }
}

ElboTerms elbo_terms(const VariationalState& state, const Dataset& ds,
                     const Hyperparameters& hyper, int threads) {
    check_dataset_state(state, ds, "elbo_terms");
    const Index v_count = state.voxel_count();
    const Index d_count = state.component_count();
    const Index b_count = state.subject_count();
    const double vd = static_cast<double>(v_count) * static_cast<double>(d_count);

    ElboTerms t;
    const Matrix residual = expected_residual_sq(state, ds, threads);

    // Likelihood, tau prior, Q(tau) entropy: all per (voxel, subject).
    const double lg_a_tau = lgamma(hyper.a_tau);
    for (Index b = 0; b < b_count; ++b) {
        const double t_b = static_cast<double>(ds.timepoints(b));
        const double shape = state.tau_shape(b);
        const double psi_shape = digamma(shape);
        const double lg_shape = lgamma(shape);
        double sum_log_tau = 0.0;   // sum_v <log tau_v>
        double sum_tau_res = 0.0;   // sum_v <tau_v> E_v
        double sum_tau_mean = 0.0;  // sum_v <tau_v>
        double sum_log_rate = 0.0;
        for (Index v = 0; v < v_count; ++v) {
            const double rate = state.tau_rate(v, b);
            const double log_rate = std::log(rate);
            const double mean = shape / rate;
            sum_log_tau += psi_shape - log_rate;
            sum_tau_res += mean * residual(v, b);
            sum_tau_mean += mean;
            sum_log_rate += log_rate;
        }
        t.log_likelihood += 0.5 * t_b * sum_log_tau -
                            0.5 * static_cast<double>(v_count) * t_b * kLog2Pi -
                            0.5 * sum_tau_res;
        t.logp_tau += static_cast<double>(v_count) *
                          (-lg_a_tau + hyper.a_tau * std::log(hyper.b_tau)) +
                      (hyper.a_tau - 1.0) * sum_log_tau - hyper.b_tau * sum_tau_mean;
        t.entropy_tau += static_cast<double>(v_count) *
                             (lg_shape - (shape - 1.0) * psi_shape + shape) -
                         sum_log_rate;
    }

    // Map prior P(A|alpha), alpha prior, Q(alpha) entropy: per (voxel, component).
    {
        const double shape = state.alpha_shape;
        const double psi_shape = digamma(shape);
        const double lg_shape = lgamma(shape);
        const double lg_a_alpha = lgamma(hyper.a_alpha);
        double sum_log_rate = 0.0;
        double sum_log_alpha = 0.0;
        double sum_alpha_asq = 0.0;
        double sum_alpha_mean = 0.0;
        for (Index d = 0; d < d_count; ++d) {
            for (Index v = 0; v < v_count; ++v) {
                const double rate = state.alpha_rate(v, d);
                const double log_rate = std::log(rate);
                const double mean = shape / rate;
                sum_log_rate += log_rate;
                sum_log_alpha += psi_shape - log_rate;
                sum_alpha_asq += mean * state.second_moment_A(v, d);
                sum_alpha_mean += mean;
            }
        }
        t.logp_A = -0.5 * vd * kLog2Pi + 0.5 * sum_log_alpha - 0.5 * sum_alpha_asq;
        t.logp_alpha = vd * (-lg_a_alpha + hyper.a_alpha * std::log(hyper.b_alpha)) +
                       (hyper.a_alpha - 1.0) * sum_log_alpha -
                       hyper.b_alpha * sum_alpha_mean;
        t.entropy_alpha =
            vd * (lg_shape - (shape - 1.0) * psi_shape + shape) - sum_log_rate;
    }

    // Time-course prior P(S|gamma), gamma prior, Q(gamma) entropy.
    {
        const double shape = state.gamma_shape;
        const double psi_shape = digamma(shape);
        const double lg_shape = lgamma(shape);
        const double lg_a_gamma = lgamma(hyper.a_gamma);
        double sum_log_gamma = 0.0;  // sum_d <log gamma_d>
        for (Index d = 0; d < d_count; ++d) {
            const double log_rate = std::log(state.gamma_rate(d));
            const double mean = shape / state.gamma_rate(d);
            sum_log_gamma += psi_shape - log_rate;
            t.logp_gamma += -lg_a_gamma + hyper.a_gamma * std::log(hyper.b_gamma) +
                            (hyper.a_gamma - 1.0) * (psi_shape - log_rate) -
                            hyper.b_gamma * mean;
            t.entropy_gamma +=
                lg_shape - (shape - 1.0) * psi_shape - log_rate + shape;
        }
        for (Index b = 0; b < b_count; ++b) {
            const double t_b = static_cast<double>(ds.timepoints(b));
            const Matrix sst = expected_SSt(state, b);
            double gamma_quad = 0.0;
            for (Index d = 0; d < d_count; ++d) {
                gamma_quad += state.gamma_mean(d) * sst(d, d);
            }
            t.logp_S += -0.5 * t_b * static_cast<double>(d_count) * kLog2Pi +
                        0.5 * t_b * sum_log_gamma - 0.5 * gamma_quad;
        }
    }

    // Subject means, when modeled.
    if (state.models_mean()) {
        for (Index b = 0; b < b_count; ++b) {
            double musq = 0.0;
            double log_sigma = 0.0;
            for (Index v = 0; v < v_count; ++v) {
                musq += state.second_moment_mu(v, b);
                log_sigma += std::log(state.sigma_mu_diag(v, b));
            }
            t.logp_mu += -0.5 * static_cast<double>(v_count) * kLog2Pi +
                         0.5 * static_cast<double>(v_count) * std::log(hyper.beta) -
                         0.5 * hyper.beta * musq;
            t.entropy_mu += 0.5 * log_sigma +
                            0.5 * static_cast<double>(v_count) * (1.0 + kLog2Pi);
        }
    }

    // Gaussian entropies of Q(A) and Q(S).
    t.entropy_A = parallel_sum(v_count, threads, [&](Index v) {
                      return 0.5 *
                             pd_factorize(state.sigma_A[static_cast<std::size_t>(v)])
                                 .log_det();
                  }) +
                  0.5 * vd * (1.0 + kLog2Pi);
    for (Index b = 0; b < b_count; ++b) {
        const double t_b = static_cast<double>(ds.timepoints(b));
        const double log_det =
            pd_factorize(state.sigma_S[static_cast<std::size_t>(b)]).log_det();
        t.entropy_S +=
            t_b * (0.5 * log_det + 0.5 * static_cast<double>(d_count) * (1.0 + kLog2Pi));
    }

    if (!std::isfinite(t.total())) {
        throw NonFiniteValue("elbo: total is not finite");
    }
    return t;
}

double elbo(const VariationalState& state, const Dataset& ds,
            const Hyperparameters& hyper, int threads) {
    return elbo_terms(state, ds, hyper, threads).total();
}

Matrix reconstruct(const VariationalState& state, Index b) {
    Matrix r = state.mu_A * state.mu_S[static_cast<std::size_t>(b)];
    if (state.models_mean()) {
        r.colwise() += state.mu_mu.col(b);
    }
    return r;
}

int effective_components(const VariationalState& state, double threshold) {
    const Index d_count = state.component_count();
    Vector map_energy = Vector::Zero(d_count);
    for (Index d = 0; d < d_count; ++d) {
        for (Index v = 0; v < state.voxel_count(); ++v) {
            map_energy(d) += state.second_moment_A(v, d);
        }
    }
    Vector course_energy = Vector::Zero(d_count);
    for (Index b = 0; b < state.subject_count(); ++b) {
        course_energy += expected_SSt(state, b).diagonal();
    }
    const Vector share = map_energy.cwiseProduct(course_energy);
    const double total = share.sum();
    int count = 0;
    for (Index d = 0; d < d_count; ++d) {
        if (share(d) > threshold * total) ++count;
    }
    return count;
}

namespace {

void run_cycle(VariationalState& state, const Dataset& ds, const FitOptions& opts,
               int threads) {
    update_spatial_maps(state, ds, threads);
    update_time_courses(state, ds, threads);
    if (opts.model_mean) {
        update_subject_means(state, ds, opts.hyper, opts.mu_cov_form);
    }
    if (opts.model == ModelKind::Psfa) {
        update_alpha(state, opts.hyper, opts.alpha_rate_form);
    }
    update_gamma(state, opts.hyper);
    update_noise(state, ds, opts.hyper, threads);
}

struct RestartOutcome {
    bool converged = false;
    int iterations = 0;
};

// Best-so-far bookkeeping shared with the iteration callback.
struct FitProgress {
    std::optional<VariationalState> best_state;
    FitReport best;
    int restarts_attempted = 0;
    std::vector<int> failed;
};

RestartOutcome run_restart(const Dataset& ds, const FitOptions& opts, int threads,
                           int restart_index, VariationalState& state, int start_iter,
                           std::vector<double>& trace, std::vector<int>& trace_iters,
                           const FitProgress& progress,
                           const IterationCallback& callback) {
    if (start_iter == 0) {
        trace.assign(1, elbo(state, ds, opts.hyper, threads));
        trace_iters.assign(1, 0);
    }
    RestartOutcome out;
    for (int iter = start_iter + 1; iter <= opts.max_iters; ++iter) {
        run_cycle(state, ds, opts, threads);
        out.iterations = iter;
        const bool evaluate = (iter % opts.elbo_every == 0) || iter == opts.max_iters;
        bool stop = false;
        if (evaluate) {
            const double value = elbo(state, ds, opts.hyper, threads);
            const double prev = trace.back();
            if (opts.check_monotone && value < prev - kMonotoneSlack * std::abs(prev)) {
                throw MonotonicityViolation(
                    "fit: ELBO decreased from " + std::to_string(prev) + " to " +
                    std::to_string(value) + " at iteration " + std::to_string(iter));
            }
            trace.push_back(value);
            trace_iters.push_back(iter);
            const double denom = std::max({std::abs(value), std::abs(prev),
                                           std::numeric_limits<double>::min()});
            stop = std::abs(value - prev) / denom <= opts.rel_tol;
        }
        if (callback) {
            callback(IterationInfo{restart_index, iter, state, trace, trace_iters,
                                   progress.best_state ? &*progress.best_state : nullptr,
                                   progress.best_state ? &progress.best : nullptr,
                                   progress.restarts_attempted, &progress.failed});
        }
        if (stop) {
            out.converged = true;
            break;
        }
    }
    return out;
}

std::pair<VariationalState, FitReport> fit_impl(const Dataset& ds,
                                                const FitOptions& opts,
                                                ResumePoint* resume,
                                                const IterationCallback& callback) {
    opts.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const int threads = resolve_threads(opts.threads);

    FitProgress progress;
    int first_restart = 0;

    if (resume) {
        first_restart = resume->restart_index;
        progress.restarts_attempted = resume->restarts_attempted;
        progress.failed = resume->failed_restarts;
        if (resume->has_best) {
            progress.best_state = std::move(resume->best_state);
            progress.best = resume->best_report;
        }
    }

    for (int i = first_restart; i < opts.restarts; ++i) {
        VariationalState state;
        std::vector<double> trace;
        std::vector<int> trace_iters;
        int start_iter = 0;
        const bool resuming_this = resume && i == resume->restart_index;
        if (!resuming_this) ++progress.restarts_attempted;
        try {
            if (resuming_this) {
                state = std::move(resume->state);
                trace = resume->elbo_trace;
                trace_iters = resume->elbo_iters;
                start_iter = resume->iteration;
            } else {
                SeededRng rng(opts.seed + static_cast<std::uint64_t>(i));
                state = initialize(ds, opts, rng);
            }
            const RestartOutcome outcome =
                run_restart(ds, opts, threads, i, state, start_iter, trace, trace_iters,
                            progress, callback);
            if (!progress.best_state || trace.back() > progress.best.elbo_trace.back()) {
                progress.best_state = std::move(state);
                progress.best.elbo_trace = std::move(trace);
                progress.best.elbo_iters = std::move(trace_iters);
                progress.best.converged = outcome.converged;
                progress.best.iterations_run = outcome.iterations;
                progress.best.restart_index = i;
            }
        } catch (const NumericError&) {
            progress.failed.push_back(i);
        }
    }
    std::optional<VariationalState>& best_state = progress.best_state;
    FitReport& best = progress.best;

    if (!best_state) {
        throw AllRestartsFailed("fit: no restart completed");
    }
    best.final_terms = elbo_terms(*best_state, ds, opts.hyper, threads);
    best.effective_components = effective_components(*best_state, 0.01);
    best.restarts_attempted = progress.restarts_attempted;
    best.failed_restarts = std::move(progress.failed);
    best.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(*best_state), std::move(best)};
}

}  // namespace

std::pair<VariationalState, FitReport> fit(const Dataset& ds, const FitOptions& opts,
                                           const IterationCallback& callback) {
    return fit_impl(ds, opts, nullptr, callback);
}

std::pair<VariationalState, FitReport> fit_resume(const Dataset& ds,
                                                  const FitOptions& opts,
                                                  ResumePoint resume,
                                                  const IterationCallback& callback) {
    return fit_impl(ds, opts, &resume, callback);
}

}  // namespace psfa
