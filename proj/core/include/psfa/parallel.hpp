#ifndef PSFA_PARALLEL_HPP
#define PSFA_PARALLEL_HPP

#include <functional>

#include "psfa/types.hpp"

namespace psfa {

// Fixed chunk width for parallel loops. Chunk boundaries depend only on the
// problem size, never on the worker count, so per-chunk partial results can be
// reduced in chunk order to give sums that are identical for any thread count.
inline constexpr Index kParallelChunk = 256;

Index chunk_count(Index n);

// Calls fn(chunk, begin, end) for every chunk of [0, n). With threads <= 1 the
// chunks run inline on the calling thread; otherwise they are distributed over
// a transient pool. fn must only write to chunk-local or per-index slots.
void parallel_for_chunks(Index n, int threads,
                         const std::function<void(Index, Index, Index)>& fn);

// Resolves a requested worker count: values < 1 mean "use the hardware count".
int resolve_threads(int requested);

}  // namespace psfa

#endif
