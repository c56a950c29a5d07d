#pragma once

#include <cstddef>
#include <functional>

namespace ernn {

// Worker cap: ERNN_THREADS if set to a positive integer, else the hardware
// concurrency (at least 1).
[[nodiscard]] std::size_t worker_count();

// Runs fn(i) for i in [0, n) across up to worker_count() threads. fn must only
// write to state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ernn
