#include "psfa/dataset.hpp"

#include <cmath>
#include <string>

#include "psfa/errors.hpp"

namespace psfa {

void Hyperparameters::validate() const {
    const double values[] = {a_alpha, b_alpha, a_gamma, b_gamma, a_tau, b_tau, beta};
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidParameter("Hyperparameters: all fields must be strictly positive");
        }
    }
}

Dataset::Dataset(std::vector<Matrix> subjects) : data_(std::move(subjects)) {
    if (data_.empty()) {
        throw InvalidParameter("Dataset: needs at least one subject");
    }
    const Index v = data_.front().rows();
    if (v < 1) {
        throw InvalidParameter("Dataset: needs at least one voxel");
    }
    for (std::size_t b = 0; b < data_.size(); ++b) {
        const Matrix& x = data_[b];
        if (x.rows() != v) {
            throw DimensionMismatch("Dataset: subject " + std::to_string(b) +
                                    " has a different voxel count");
        }
        if (x.cols() < 1) {
            throw InvalidParameter("Dataset: subject " + std::to_string(b) +
                                   " has no timepoints");
        }
        if (!x.allFinite()) {
            throw NonFiniteValue("Dataset: subject " + std::to_string(b) +
                                 " contains non-finite values");
        }
    }
}

Index Dataset::total_timepoints() const {
    Index total = 0;
    for (const auto& x : data_) total += x.cols();
    return total;
}

Dataset demean_voxels(const Dataset& ds) {
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(ds.subject_count()));
    for (Index b = 0; b < ds.subject_count(); ++b) {
        Matrix x = ds.data(b);
        x.colwise() -= x.rowwise().mean().eval();
        out.push_back(std::move(x));
    }
    return Dataset(std::move(out));
}

Dataset zscore_subjects(const Dataset& ds) {
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(ds.subject_count()));
    for (Index b = 0; b < ds.subject_count(); ++b) {
        const Matrix& x = ds.data(b);
        const double n = static_cast<double>(x.size());
        const double mean = x.sum() / n;
        const double var = (x.array() - mean).square().sum() / n;
        if (!(var > 0.0)) {
            throw ZeroVariance("zscore_subjects: subject " + std::to_string(b) +
                               " has zero variance");
        }
        out.push_back(((x.array() - mean) / std::sqrt(var)).matrix());
    }
    return Dataset(std::move(out));
}

}  // namespace psfa
