#ifndef PSFA_PCA_HPP
#define PSFA_PCA_HPP

#include <vector>

#include "psfa/dataset.hpp"
#include "psfa/types.hpp"

namespace psfa {

struct PcaResult {
    Matrix spatial_maps;               // V x D, orthonormal columns
    std::vector<Matrix> timecourses;   // per subject, D x T^(b), maps^T X^(b)
    Vector singular_values;            // all min(V, sum T) values, non-increasing
    Vector explained_variance_ratio;   // length D, sigma_d^2 / sum_i sigma_i^2
};

// SVD of the temporal concatenation [X^(1) ... X^(B)]; the top-D left singular
// vectors are the group maps and their projections the per-subject courses, so
// maps * timecourses is the best rank-D approximation in Frobenius norm. Each
// component's sign is fixed so its largest-magnitude map entry is positive.
// Throws DimensionMismatch if d exceeds min(V, sum_b T^(b)).
PcaResult group_pca(const Dataset& ds, Index d);

}  // namespace psfa

#endif
