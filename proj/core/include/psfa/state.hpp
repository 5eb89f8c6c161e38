#ifndef PSFA_STATE_HPP
#define PSFA_STATE_HPP

#include <vector>

#include "psfa/types.hpp"

namespace psfa {

// All moments of the factorized posterior. Gaussian blocks are stored as mean
// plus covariance (one D x D covariance per voxel for the maps, one shared
// D x D covariance per subject for the time courses, diagonal for the subject
// means); Gamma blocks as shape/rate. The subject-mean block is present only
// when mean modeling is enabled (mu_mu has V x B entries, otherwise 0 x 0).
struct VariationalState {
    Matrix mu_A;                   // V x D
    std::vector<Matrix> sigma_A;   // V entries, each D x D
    std::vector<Matrix> mu_S;      // B entries, each D x T^(b)
    std::vector<Matrix> sigma_S;   // B entries, each D x D
    Matrix mu_mu;                  // V x B (or empty)
    Matrix sigma_mu_diag;          // V x B diagonal variances (or empty)

    double alpha_shape = 0.0;      // shared shape
    Matrix alpha_rate;             // V x D
    double gamma_shape = 0.0;
    Vector gamma_rate;             // D
    Vector tau_shape;              // B
    Matrix tau_rate;               // V x B

    Index voxel_count() const { return mu_A.rows(); }
    Index component_count() const { return mu_A.cols(); }
    Index subject_count() const { return static_cast<Index>(mu_S.size()); }
    Index timepoints(Index b) const { return mu_S[static_cast<std::size_t>(b)].cols(); }
    bool models_mean() const { return mu_mu.size() > 0; }

    // Posterior means of the precisions.
    double tau_mean(Index v, Index b) const {
        return tau_shape(b) / tau_rate(v, b);
    }
    double alpha_mean(Index v, Index d) const {
        return alpha_shape / alpha_rate(v, d);
    }
    double gamma_mean(Index d) const { return gamma_shape / gamma_rate(d); }

    // <a_vd^2> = mean^2 + per-voxel covariance diagonal.
    double second_moment_A(Index v, Index d) const {
        const double m = mu_A(v, d);
        return m * m + sigma_A[static_cast<std::size_t>(v)](d, d);
    }
    // <mu_v^(b)^2>; zero when mean modeling is disabled.
    double second_moment_mu(Index v, Index b) const {
        if (!models_mean()) return 0.0;
        const double m = mu_mu(v, b);
        return m * m + sigma_mu_diag(v, b);
    }
};

}  // namespace psfa

#endif
