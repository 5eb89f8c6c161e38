#include "psfa/pca.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "psfa/errors.hpp"

namespace psfa {

PcaResult group_pca(const Dataset& ds, Index d) {
    const Index v_count = ds.voxel_count();
    const Index total_t = ds.total_timepoints();
    if (d < 1 || d > std::min(v_count, total_t)) {
        throw DimensionMismatch("group_pca: components must lie in [1, min(V, sum T)], got " +
                                std::to_string(d));
    }

    Matrix concat(v_count, total_t);
    Index offset = 0;
    for (Index b = 0; b < ds.subject_count(); ++b) {
        concat.middleCols(offset, ds.timepoints(b)) = ds.data(b);
        offset += ds.timepoints(b);
    }

    Eigen::BDCSVD<Matrix> svd(concat, Eigen::ComputeThinU);
    PcaResult result;
    result.singular_values = svd.singularValues();
    result.spatial_maps = svd.matrixU().leftCols(d);

    // Deterministic sign: largest-magnitude entry of each map positive.
    for (Index j = 0; j < d; ++j) {
        Index arg = 0;
        result.spatial_maps.col(j).cwiseAbs().maxCoeff(&arg);
        if (result.spatial_maps(arg, j) < 0.0) {
            result.spatial_maps.col(j) = -result.spatial_maps.col(j);
        }
    }

    const double total_energy = result.singular_values.squaredNorm();
    if (total_energy > 0.0) {
        result.explained_variance_ratio =
            result.singular_values.head(d).array().square() / total_energy;
    } else {
        result.explained_variance_ratio = Vector::Zero(d);
    }

    result.timecourses.reserve(static_cast<std::size_t>(ds.subject_count()));
    for (Index b = 0; b < ds.subject_count(); ++b) {
        result.timecourses.push_back(result.spatial_maps.transpose() * ds.data(b));
    }
    return result;
}

}  // namespace psfa
