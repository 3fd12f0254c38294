#ifndef TWRAOI_PARALLEL_HPP_
#define TWRAOI_PARALLEL_HPP_

#include <cstdint>
#include <functional>

namespace twraoi {

// Number of worker threads to use; 0 picks the hardware concurrency.
unsigned resolve_thread_count(unsigned requested);

// Runs fn(i) for every i in [0, n_blocks) across up to n_threads workers.
// Blocks until done; the first exception thrown by any worker is rethrown.
// Work items must be independent — no ordering is guaranteed.
void parallel_blocks(std::uint64_t n_blocks, unsigned n_threads,
                     const std::function<void(std::uint64_t)>& fn);

}  // namespace twraoi

#endif  // TWRAOI_PARALLEL_HPP_
