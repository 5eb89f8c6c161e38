#ifndef PSFA_IO_HPP
#define PSFA_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "psfa/dataset.hpp"
#include "psfa/engine.hpp"
#include "psfa/state.hpp"
#include "psfa/types.hpp"

namespace psfa {

// Binary formats, little-endian throughout:
//   dataset ("PSFA"): magic, u32 version=1, u64 V, u64 B, B x u64 T^(b), then
//     B blocks of V*T^(b) float64 in column-major order (voxel index fastest).
//   matrix ("PSFM"): magic, u32 version=1, u64 rows, u64 cols, column-major
//     float64 payload.
// Readers throw BadMagic, UnsupportedVersion, TruncatedFile or NonFiniteValue.

void write_dataset(const Dataset& ds, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

void write_matrix(const Matrix& m, const std::filesystem::path& path);
// Plain text, one row per line, comma separated, 17 significant digits.
void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);
// Sniffs the "PSFM" magic and falls back to CSV, so externally produced maps
// can be passed anywhere a matrix is expected. CSV failures throw
// CsvParseError.
Matrix read_matrix(const std::filesystem::path& path);

// Raw stream round trip of a full variational state, bit-exact.
void write_state(std::ostream& out, const VariationalState& state);
VariationalState read_state(std::istream& in);

// Full-fit snapshot ("PSFC"): enough to continue a multi-restart fit exactly
// where it stopped, plus the identity of the run it belongs to.
struct Checkpoint {
    std::uint64_t seed = 0;
    ModelKind model = ModelKind::Psfa;
    bool model_mean = false;
    Index components = 0;
    Index voxels = 0;
    std::vector<Index> timepoints;  // per subject

    int restart_index = 0;
    int iteration = 0;
    VariationalState state;
    std::vector<double> elbo_trace;
    std::vector<int> elbo_iters;

    bool has_best = false;
    int best_restart_index = 0;
    int best_iterations = 0;
    bool best_converged = false;
    std::vector<double> best_elbo_trace;
    std::vector<int> best_elbo_iters;
    VariationalState best_state;

    int restarts_attempted = 0;
    std::vector<int> failed_restarts;
};

void write_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint read_checkpoint(const std::filesystem::path& path);

// Builds the engine resume description from a snapshot; `ckpt` is consumed.
ResumePoint to_resume_point(Checkpoint&& ckpt);

}  // namespace psfa

#endif
