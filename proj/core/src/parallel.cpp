#include "psfa/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace psfa {

Index chunk_count(Index n) {
    return (n + kParallelChunk - 1) / kParallelChunk;
}

int resolve_threads(int requested) {
    if (requested >= 1) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for_chunks(Index n, int threads,
                         const std::function<void(Index, Index, Index)>& fn) {
    if (n <= 0) return;
    const Index chunks = chunk_count(n);
    auto run_chunk = [&](Index c) {
        const Index begin = c * kParallelChunk;
        const Index end = std::min(begin + kParallelChunk, n);
        fn(c, begin, end);
    };
    if (threads <= 1 || chunks == 1) {
        for (Index c = 0; c < chunks; ++c) run_chunk(c);
        return;
    }
    const int workers = static_cast<int>(std::min<Index>(threads, chunks));
    std::atomic<Index> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (Index c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
                    run_chunk(c);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(chunks);  // stop handing out work
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace psfa
