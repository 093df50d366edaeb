#pragma once

#include <cstddef>
#include <functional>

namespace matrange {

// MATRANGE_THREADS if set, otherwise std::thread::hardware_concurrency().
int thread_count();

// Runs body(i) for i in [0, n) on a small pool. Results must be written to
// per-index slots; the first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace matrange
