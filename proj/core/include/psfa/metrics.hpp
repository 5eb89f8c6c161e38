#ifndef PSFA_METRICS_HPP
#define PSFA_METRICS_HPP

#include <vector>

#include "psfa/state.hpp"
#include "psfa/types.hpp"

namespace psfa {

// An injective assignment of estimated components to reference components,
// with the sign that makes each matched correlation non-negative. Pairs are
// ordered by reference index.
struct ComponentMatch {
    std::vector<Index> est_index;
    std::vector<Index> ref_index;
    std::vector<double> sign;         // +1 or -1
    std::vector<double> correlation;  // |Pearson r| of the pair, in [0, 1]

    std::size_t size() const { return est_index.size(); }
};

// Pearson correlation with population (1/n) normalization. Returns 0 when
// either input is constant (a fully pruned map correlates with nothing).
double pearson(const Vector& x, const Vector& y);

// Maximizes the total |Pearson correlation| over min(D_est, D_ref) pairs with
// an exact O(n^3) assignment solver. Throws DimensionMismatch if the voxel
// counts differ.
ComponentMatch match_components(const Matrix& est, const Matrix& ref);

// Mean |correlation| over matched pairs. Throws InvalidParameter on an empty
// match.
double avg_abs_correlation(const ComponentMatch& match);

// Columns of est reordered (and sign-flipped) to line up with the reference:
// column k holds the estimated map matched to reference component
// match.ref_index[k].
Matrix reorder_to_reference(const Matrix& est, const ComponentMatch& match);

// Permutation- and scale-invariant distance between two bases with the same
// column count: with P = pinv(ref) * est,
//   (1/2D) [ sum_i (sum_j |p_ij| / max_j |p_ij| - 1)
//          + sum_j (sum_i |p_ij| / max_i |p_ij| - 1) ].
// Zero iff P is a scaled permutation; at most D - 1. Throws SingularReference
// when ref is rank deficient.
double amari_index(const Matrix& est, const Matrix& ref);

// m4 / m2^2 with central moments (Gaussian baseline 3). Requires length >= 4
// (InvalidParameter) and nonzero variance (ZeroVariance).
double empirical_kurtosis(const std::vector<double>& values);
double empirical_kurtosis(const Vector& values);

// Z-scores the map and returns +1 where z > threshold, -1 where z < -threshold,
// 0 elsewhere. Throws ZeroVariance on a constant map.
std::vector<int> zscore_threshold_map(const Vector& map, double threshold);

// Per-voxel (1/B) sum_b <log tau_v^(b)> = (1/B) sum_b [psi(a~_tau^(b)) - log b~_tau,v^(b)].
Vector mean_log_precision_map(const VariationalState& state);

}  // namespace psfa

#endif
