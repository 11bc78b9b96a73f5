#pragma once

#include <cstddef>
#include <functional>

namespace hurst {

// Worker count: HURST_THREADS when set (>= 1), else hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, n) across workers. Tasks must be independent; the
// first thrown exception is rethrown on the calling thread after all workers
// join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hurst
