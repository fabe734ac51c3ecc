#pragma once

#include <cstddef>
#include <functional>

namespace expdyn {

/// Worker count used by parallel_for. 0 restores the default
/// (std::thread::hardware_concurrency()).
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Runs body(i) for i in [0, n), splitting the index range into contiguous
/// blocks, one per worker. Callers write results into per-index slots so the
/// outcome never depends on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace expdyn
