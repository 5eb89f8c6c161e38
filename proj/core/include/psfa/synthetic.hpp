#ifndef PSFA_SYNTHETIC_HPP
#define PSFA_SYNTHETIC_HPP

#include <utility>
#include <vector>

#include "psfa/dataset.hpp"
#include "psfa/rng.hpp"
#include "psfa/types.hpp"

namespace psfa {

// Ground truth kept alongside a generated dataset.
struct SyntheticTruth {
    Matrix spatial_maps;           // V x D_true, already masked
    std::vector<Matrix> sources;   // per subject, D_true x T
    Matrix noise_variance;         // V x B, the true 1/tau, strictly positive
    Matrix mask;                   // V x D_true with entries in {0, 1}
};

// Defaults are the desk-scale benchmark: 3 unit-variance sources of length 25
// mapped to 1000 voxels through a half-dense Gaussian map, 3 subjects, noise
// variances around 0.009.
struct SyntheticOptions {
    Index voxels = 1000;
    Index timepoints = 25;
    Index subjects = 3;
    Index components = 3;     // D_true
    double sparsity = 0.5;    // fraction of map entries zeroed
    double noise_mean = 0.009;
    double noise_sd = 0.002;  // standard deviation of the variance draw
};

// Draw order (column-major within each block, fixed by tests):
//   1. raw map entries ~ N(0,1), 2. mask = [Uniform(0,1) > sparsity],
//   3. per-subject sources ~ N(0,1), 4. per-(voxel,subject) noise variances
//   ~ N(noise_mean, noise_sd^2) redrawn until > 1e-8, 5. observation noise.
// Throws InvalidParameter on bad dimensions, sparsity outside [0,1],
// noise_mean <= 0, or a variance distribution that never produces a
// positive draw.
std::pair<Dataset, SyntheticTruth> generate_synthetic(SeededRng& rng,
                                                      const SyntheticOptions& opt);

}  // namespace psfa

#endif
