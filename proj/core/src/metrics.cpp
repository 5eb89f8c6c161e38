#include "psfa/metrics.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "psfa/errors.hpp"
#include "psfa/numerics.hpp"

namespace psfa {

double pearson(const Vector& x, const Vector& y) {
    if (x.size() != y.size()) {
        throw DimensionMismatch("pearson: length mismatch");
    }
    const double n = static_cast<double>(x.size());
    const double mx = x.mean();
    const double my = y.mean();
    const Eigen::ArrayXd dx = x.array() - mx;
    const Eigen::ArrayXd dy = y.array() - my;
    const double sx = dx.square().sum() / n;
    const double sy = dy.square().sum() / n;
    if (!(sx > 0.0) || !(sy > 0.0)) return 0.0;
    return (dx * dy).sum() / n / std::sqrt(sx * sy);
}

namespace {

// Shortest-augmenting-path assignment: minimizes total cost over rows of an
// n x m cost matrix with n <= m; returns the column chosen for each row.
std::vector<Index> min_cost_assignment(const Matrix& cost) {
    const Index n = cost.rows();
    const Index m = cost.cols();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
    std::vector<Index> matched_row(static_cast<std::size_t>(m) + 1, 0);
    std::vector<Index> way(static_cast<std::size_t>(m) + 1, 0);
    for (Index i = 1; i <= n; ++i) {
        matched_row[0] = i;
        Index j0 = 0;
        std::vector<double> min_slack(static_cast<std::size_t>(m) + 1, inf);
        std::vector<bool> used(static_cast<std::size_t>(m) + 1, false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const Index i0 = matched_row[static_cast<std::size_t>(j0)];
            double delta = inf;
            Index j1 = -1;
            for (Index j = 1; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < min_slack[static_cast<std::size_t>(j)]) {
                    min_slack[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (min_slack[static_cast<std::size_t>(j)] < delta) {
                    delta = min_slack[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (Index j = 0; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(matched_row[static_cast<std::size_t>(j)])] +=
                        delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    min_slack[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (matched_row[static_cast<std::size_t>(j0)] != 0);
        do {
            const Index j1 = way[static_cast<std::size_t>(j0)];
            matched_row[static_cast<std::size_t>(j0)] =
                matched_row[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<Index> chosen(static_cast<std::size_t>(n), -1);
    for (Index j = 1; j <= m; ++j) {
        const Index i = matched_row[static_cast<std::size_t>(j)];
        if (i > 0) chosen[static_cast<std::size_t>(i - 1)] = j - 1;
    }
    return chosen;
}

}  // namespace

ComponentMatch match_components(const Matrix& est, const Matrix& ref) {
    if (est.rows() != ref.rows()) {
        throw DimensionMismatch("match_components: voxel counts differ");
    }
    if (est.cols() < 1 || ref.cols() < 1) {
        throw InvalidParameter("match_components: need at least one component per side");
    }
    const Index d_est = est.cols();
    const Index d_ref = ref.cols();

    Matrix corr(d_est, d_ref);
    for (Index i = 0; i < d_est; ++i) {
        for (Index j = 0; j < d_ref; ++j) {
            corr(i, j) = pearson(est.col(i), ref.col(j));
        }
    }

    // The solver assigns every row, so rows are the smaller side.
    const bool est_rows = d_est <= d_ref;
    const Matrix cost = est_rows ? (-corr.cwiseAbs()).eval()
                                 : (-corr.cwiseAbs().transpose()).eval();
    const std::vector<Index> chosen = min_cost_assignment(cost);

    const Index pairs = std::min(d_est, d_ref);
    std::vector<std::pair<Index, Index>> est_ref(static_cast<std::size_t>(pairs));
    for (Index k = 0; k < pairs; ++k) {
        const Index row = k;
        const Index col = chosen[static_cast<std::size_t>(k)];
        est_ref[static_cast<std::size_t>(k)] =
            est_rows ? std::make_pair(row, col) : std::make_pair(col, row);
    }
    std::sort(est_ref.begin(), est_ref.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });

    ComponentMatch match;
    for (const auto& [e, r] : est_ref) {
        const double rho = corr(e, r);
        match.est_index.push_back(e);
        match.ref_index.push_back(r);
        match.sign.push_back(rho < 0.0 ? -1.0 : 1.0);
        match.correlation.push_back(std::abs(rho));
    }
    return match;
}

double avg_abs_correlation(const ComponentMatch& match) {
    if (match.size() == 0) {
        throw InvalidParameter("avg_abs_correlation: empty match");
    }
    const double total =
        std::accumulate(match.correlation.begin(), match.correlation.end(), 0.0);
    return total / static_cast<double>(match.size());
}

Matrix reorder_to_reference(const Matrix& est, const ComponentMatch& match) {
    Matrix out(est.rows(), static_cast<Index>(match.size()));
    for (std::size_t k = 0; k < match.size(); ++k) {
        out.col(static_cast<Index>(k)) =
            match.sign[k] * est.col(match.est_index[k]);
    }
    return out;
}

double amari_index(const Matrix& est, const Matrix& ref) {
    if (est.rows() != ref.rows() || est.cols() != ref.cols()) {
        throw DimensionMismatch("amari_index: shapes differ");
    }
    const Index d = ref.cols();
    Eigen::BDCSVD<Matrix> svd(ref, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double tol = static_cast<double>(std::max(ref.rows(), ref.cols())) *
                       std::numeric_limits<double>::epsilon() * sv(0);
    if (!(sv(d - 1) > tol)) {
        throw SingularReference("amari_index: reference maps are rank deficient");
    }
    const Matrix p = svd.matrixV() * sv.cwiseInverse().asDiagonal() *
                     svd.matrixU().transpose() * est;

    const Matrix abs_p = p.cwiseAbs();
    double total = 0.0;
    for (Index i = 0; i < d; ++i) {
        const double row_max = abs_p.row(i).maxCoeff();
        if (!(row_max > 0.0)) {
            throw SingularReference("amari_index: zero row in mixing matrix");
        }
        total += abs_p.row(i).sum() / row_max - 1.0;
    }
    for (Index j = 0; j < d; ++j) {
        const double col_max = abs_p.col(j).maxCoeff();
        if (!(col_max > 0.0)) {
            throw SingularReference("amari_index: zero column in mixing matrix");
        }
        total += abs_p.col(j).sum() / col_max - 1.0;
    }
    return total / (2.0 * static_cast<double>(d));
}

double empirical_kurtosis(const std::vector<double>& values) {
    return empirical_kurtosis(
        Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size())));
}

double empirical_kurtosis(const Vector& values) {
    if (values.size() < 4) {
        throw InvalidParameter("empirical_kurtosis: need at least 4 values");
    }
    const double n = static_cast<double>(values.size());
    const double mean = values.mean();
    const Eigen::ArrayXd centered = values.array() - mean;
    const double m2 = centered.square().sum() / n;
    if (!(m2 > 0.0)) {
        throw ZeroVariance("empirical_kurtosis: zero variance");
    }
    const double m4 = centered.square().square().sum() / n;
    return m4 / (m2 * m2);
}

std::vector<int> zscore_threshold_map(const Vector& map, double threshold) {
    const double n = static_cast<double>(map.size());
    const double mean = map.mean();
    const Eigen::ArrayXd centered = map.array() - mean;
    const double var = centered.square().sum() / n;
    if (!(var > 0.0)) {
        throw ZeroVariance("zscore_threshold_map: constant map");
    }
    const double sd = std::sqrt(var);
    std::vector<int> out(static_cast<std::size_t>(map.size()), 0);
    for (Index v = 0; v < map.size(); ++v) {
        const double z = centered(v) / sd;
        if (z > threshold) {
            out[static_cast<std::size_t>(v)] = 1;
        } else if (z < -threshold) {
            out[static_cast<std::size_t>(v)] = -1;
        }
    }
    return out;
}

Vector mean_log_precision_map(const VariationalState& state) {
    const Index v_count = state.voxel_count();
    const Index b_count = state.subject_count();
    Vector out = Vector::Zero(v_count);
    for (Index b = 0; b < b_count; ++b) {
        const double psi_shape = digamma(state.tau_shape(b));
        out.array() += psi_shape - state.tau_rate.col(b).array().log();
    }
    return out / static_cast<double>(b_count);
}

}  // namespace psfa
