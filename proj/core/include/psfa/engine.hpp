#ifndef PSFA_ENGINE_HPP
#define PSFA_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "psfa/dataset.hpp"
#include "psfa/rng.hpp"
#include "psfa/state.hpp"
#include "psfa/types.hpp"

namespace psfa {

enum class ModelKind { Psfa, Pfa };

// The appendix-as-printed forms of two updates break coordinate-ascent
// monotonicity; the corrected forms are the defaults. The printed forms stay
// selectable so the repair is demonstrable.
enum class AlphaRateForm {
    Halved,    // rate += <a^2> / 2 (conjugate update)
    Verbatim,  // rate += <a^2>
};
enum class MuCovForm {
    PerTimepoint,  // (beta + T^(b) <tau>)^-1 (conjugate over T^(b) likelihood terms)
    Verbatim,      // (beta + <tau>)^-1
};

struct FitOptions {
    Index components = 6;  // D
    ModelKind model = ModelKind::Psfa;
    int max_iters = 500;
    double rel_tol = 1e-9;   // relative ELBO change threshold
    int restarts = 1;        // independent fits with seeds seed, seed+1, ...
    std::uint64_t seed = 0;
    bool model_mean = false;
    Hyperparameters hyper{};
    int elbo_every = 1;           // iterations between ELBO evaluations
    bool check_monotone = true;   // throw MonotonicityViolation on ELBO decrease
    int threads = 1;              // worker count; results do not depend on it
    AlphaRateForm alpha_rate_form = AlphaRateForm::Halved;
    MuCovForm mu_cov_form = MuCovForm::PerTimepoint;

    void validate() const;
};

// One entry per expected-log-prior term and per Q-entropy; total() is their
// sum. Subject-mean entries are zero when mean modeling is off.
struct ElboTerms {
    double log_likelihood = 0.0;
    double logp_A = 0.0;
    double logp_S = 0.0;
    double logp_mu = 0.0;
    double logp_alpha = 0.0;
    double logp_gamma = 0.0;
    double logp_tau = 0.0;
    double entropy_A = 0.0;
    double entropy_S = 0.0;
    double entropy_mu = 0.0;
    double entropy_alpha = 0.0;
    double entropy_gamma = 0.0;
    double entropy_tau = 0.0;

    double total() const {
        return log_likelihood + logp_A + logp_S + logp_mu + logp_alpha + logp_gamma +
               logp_tau + entropy_A + entropy_S + entropy_mu + entropy_alpha +
               entropy_gamma + entropy_tau;
    }
};

struct FitReport {
    std::vector<double> elbo_trace;  // one entry per evaluation, starting at iteration 0
    std::vector<int> elbo_iters;     // iteration index of each trace entry
    ElboTerms final_terms;
    bool converged = false;
    int iterations_run = 0;
    int restart_index = 0;
    int effective_components = 0;  // at the 1% variance-share threshold
    double wall_seconds = 0.0;
    int restarts_attempted = 0;
    std::vector<int> failed_restarts;

    double best_elbo() const { return elbo_trace.back(); }
};

// --- initialization ----------------------------------------------------------

// Least-squares projection of each subject's data onto the column space of a:
// (a^T a)^-1 a^T x. Rank deficiency is absorbed by the factorization's jitter.
Matrix back_reconstruct(const Matrix& a, const Matrix& x);

// Map means ~ N(0,1), time courses back-reconstructed from them, unit
// covariances, every Gamma posterior at its prior. Retries a fresh draw up to
// 5 times if the normal equations cannot be solved, then throws
// SingularInitialization.
VariationalState initialize(const Dataset& ds, const FitOptions& opts, SeededRng& rng);

// --- coordinate updates ------------------------------------------------------
// Each call is one exact block update conditioned on the other blocks' current
// moments, so it can only raise the ELBO (for the corrected formula variants).

void update_spatial_maps(VariationalState& state, const Dataset& ds, int threads = 1);
void update_time_courses(VariationalState& state, const Dataset& ds, int threads = 1);
void update_subject_means(VariationalState& state, const Dataset& ds,
                          const Hyperparameters& hyper,
                          MuCovForm form = MuCovForm::PerTimepoint);
void update_alpha(VariationalState& state, const Hyperparameters& hyper,
                  AlphaRateForm form = AlphaRateForm::Halved);
void update_gamma(VariationalState& state, const Hyperparameters& hyper);
void update_noise(VariationalState& state, const Dataset& ds,
                  const Hyperparameters& hyper, int threads = 1);

// <S^(b) S^(b)^T> = mu_S mu_S^T + T^(b) Sigma_S.
Matrix expected_SSt(const VariationalState& state, Index b);

// <|| x_v - a_v^T S - mu_v 1 ||^2> per (voxel, subject); shared by the noise
// update and the likelihood term of the ELBO.
Matrix expected_residual_sq(const VariationalState& state, const Dataset& ds,
                            int threads = 1);

// Full evidence lower bound with per-term breakdown. Throws NonFiniteValue if
// the total is not finite.
ElboTerms elbo_terms(const VariationalState& state, const Dataset& ds,
                     const Hyperparameters& hyper, int threads = 1);
double elbo(const VariationalState& state, const Dataset& ds,
            const Hyperparameters& hyper, int threads = 1);

// --- full fits ---------------------------------------------------------------

// Called after every iteration of the current restart; carries everything a
// checkpoint needs for an exact resume, including the best completed restart.
struct IterationInfo {
    int restart_index;
    int iteration;                         // completed iterations in this restart
    const VariationalState& state;
    const std::vector<double>& elbo_trace;
    const std::vector<int>& elbo_iters;
    const VariationalState* best_state;    // best completed restart so far, or null
    const FitReport* best_report;          // trace/convergence fields only
    int restarts_attempted;                // including the current one
    const std::vector<int>* failed_restarts;
};
using IterationCallback = std::function<void(const IterationInfo&)>;

// State to continue a fit mid-restart (loaded from a checkpoint).
struct ResumePoint {
    int restart_index = 0;
    int iteration = 0;
    VariationalState state;
    std::vector<double> elbo_trace;
    std::vector<int> elbo_iters;
    // Best completed restart so far, if any.
    std::optional<VariationalState> best_state;
    FitReport best_report;
    bool has_best = false;
    int restarts_attempted = 0;  // includes the in-progress restart
    std::vector<int> failed_restarts;
};

// Runs opts.restarts coordinate-ascent fits (restart i is seeded with
// opts.seed + i), cycling [maps, time courses, means?, alpha (psFA), gamma,
// noise] and evaluating the ELBO at initialization and then every
// opts.elbo_every iterations. Stops a restart at max_iters or when the
// relative ELBO change drops below rel_tol. Returns the restart with the
// highest final ELBO. Restarts that fail numerically are recorded and
// skipped; throws AllRestartsFailed if none completes.
std::pair<VariationalState, FitReport> fit(const Dataset& ds, const FitOptions& opts,
                                           const IterationCallback& callback = {});

// Same contract, but the current restart continues from `resume` instead of a
// fresh initialization. Produces the identical result to an uninterrupted fit.
std::pair<VariationalState, FitReport> fit_resume(const Dataset& ds,
                                                  const FitOptions& opts,
                                                  ResumePoint resume,
                                                  const IterationCallback& callback = {});

// Posterior-mean reconstruction <A><S^(b)> + <mu^(b)> 1^T.
Matrix reconstruct(const VariationalState& state, Index b);

// Number of components whose share of total signal energy
// (sum_v <a_vd^2>) * (sum_b trace<s_d s_d^T>) exceeds `threshold` of the total.
int effective_components(const VariationalState& state, double threshold);

}  // namespace psfa

#endif
