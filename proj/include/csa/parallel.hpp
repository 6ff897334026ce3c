#pragma once

#include <cstddef>
#include <functional>

namespace csa {

/// Worker threads to use: hardware concurrency, capped by the CSA_THREADS
/// environment variable when it holds a positive integer.
std::size_t worker_count();

/// Runs body(i) for i in [0, count) across worker threads. Callers write
/// results into slots indexed by i, so scheduling never affects output.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace csa
