#ifndef PSFA_DATASET_HPP
#define PSFA_DATASET_HPP

#include <vector>

#include "psfa/types.hpp"

namespace psfa {

// Fixed Gamma shape/rate pairs for the precision priors and the precision of
// the subject-mean prior. Scalars, broadcast over all indices.
struct Hyperparameters {
    double a_alpha = 1e-6;
    double b_alpha = 1e-6;
    double a_gamma = 1e-6;
    double b_gamma = 1e-6;
    double a_tau = 1e-6;
    double b_tau = 1e-6;
    double beta = 1e-6;

    // Throws InvalidParameter unless every field is strictly positive.
    void validate() const;
};

// Observed data: one V x T^(b) matrix per subject, all sharing the voxel
// dimension. Timepoint counts may differ between subjects. Immutable after
// construction; the constructor enforces finiteness and positive dimensions.
class Dataset {
public:
    explicit Dataset(std::vector<Matrix> subjects);

    Index voxel_count() const { return data_.front().rows(); }
    Index subject_count() const { return static_cast<Index>(data_.size()); }
    Index timepoints(Index b) const { return data_[static_cast<std::size_t>(b)].cols(); }
    Index total_timepoints() const;

    const Matrix& data(Index b) const { return data_[static_cast<std::size_t>(b)]; }
    const std::vector<Matrix>& subjects() const { return data_; }

private:
    std::vector<Matrix> data_;
};

// Subtracts each voxel's temporal mean, per subject. Idempotent.
Dataset demean_voxels(const Dataset& ds);

// Standardizes each subject's whole V x T^(b) block to mean 0, variance 1
// (population normalization, one scalar mean/variance per subject).
// Throws ZeroVariance if a subject's block is constant.
Dataset zscore_subjects(const Dataset& ds);

}  // namespace psfa

#endif
