#include "psfa/synthetic.hpp"

#include <cmath>

#include "psfa/errors.hpp"

namespace psfa {

namespace {

constexpr double kVarianceFloor = 1e-8;
constexpr int kMaxRedraws = 100000;

Matrix draw_matrix_normal(SeededRng& rng, Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            m(i, j) = rng.normal();
        }
    }
    return m;
}

}  // namespace

std::pair<Dataset, SyntheticTruth> generate_synthetic(SeededRng& rng,
                                                      const SyntheticOptions& opt) {
    if (opt.voxels < 1 || opt.timepoints < 1 || opt.subjects < 1 || opt.components < 1) {
        throw InvalidParameter("generate_synthetic: all dimensions must be >= 1");
    }
    if (!(opt.sparsity >= 0.0 && opt.sparsity <= 1.0)) {
        throw InvalidParameter("generate_synthetic: sparsity must lie in [0, 1]");
    }
    if (!(opt.noise_mean > 0.0)) {
        throw InvalidParameter("generate_synthetic: noise_mean must be > 0");
    }
    if (opt.noise_sd < 0.0) {
        throw InvalidParameter("generate_synthetic: noise_sd must be >= 0");
    }

    SyntheticTruth truth;
    truth.spatial_maps = draw_matrix_normal(rng, opt.voxels, opt.components);
    truth.mask.resize(opt.voxels, opt.components);
    for (Index d = 0; d < opt.components; ++d) {
        for (Index v = 0; v < opt.voxels; ++v) {
            truth.mask(v, d) = rng.uniform01() > opt.sparsity ? 1.0 : 0.0;
        }
    }
    truth.spatial_maps.array() *= truth.mask.array();

    truth.sources.reserve(static_cast<std::size_t>(opt.subjects));
    for (Index b = 0; b < opt.subjects; ++b) {
        truth.sources.push_back(draw_matrix_normal(rng, opt.components, opt.timepoints));
    }

    truth.noise_variance.resize(opt.voxels, opt.subjects);
    for (Index b = 0; b < opt.subjects; ++b) {
        for (Index v = 0; v < opt.voxels; ++v) {
            double var = rng.normal(opt.noise_mean, opt.noise_sd);
            int redraws = 0;
            while (!(var > kVarianceFloor)) {
                if (++redraws > kMaxRedraws) {
                    throw InvalidParameter(
                        "generate_synthetic: noise variance distribution never "
                        "produced a positive draw");
                }
                var = rng.normal(opt.noise_mean, opt.noise_sd);
            }
            truth.noise_variance(v, b) = var;
        }
    }

    std::vector<Matrix> observed;
    observed.reserve(static_cast<std::size_t>(opt.subjects));
    for (Index b = 0; b < opt.subjects; ++b) {
        Matrix x = truth.spatial_maps * truth.sources[static_cast<std::size_t>(b)];
        for (Index t = 0; t < opt.timepoints; ++t) {
            for (Index v = 0; v < opt.voxels; ++v) {
                x(v, t) += rng.normal(0.0, std::sqrt(truth.noise_variance(v, b)));
            }
        }
        observed.push_back(std::move(x));
    }
    return {Dataset(std::move(observed)), std::move(truth)};
}

}  // namespace psfa
