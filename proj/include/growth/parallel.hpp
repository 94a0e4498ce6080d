#pragma once

#include <cstddef>
#include <functional>

namespace growth {

// Number of workers: min(GRANULAR_GROWTH_THREADS, hardware parallelism).
// The environment variable is re-read on every call so tests can vary it.
std::size_t worker_count();

// Runs fn(begin, end) over a static chunking of [0, n). Callers must write
// results into preallocated slots indexed by the loop variable; with that
// discipline the output is identical for any worker count.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace growth
