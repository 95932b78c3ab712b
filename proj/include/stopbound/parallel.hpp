#pragma once

#include <cstddef>
#include <functional>

namespace stopbound {

/// Number of worker threads to use. Reads STOPBOUND_THREADS once per call;
/// 0 or unset means "auto" (hardware concurrency).
std::size_t worker_count();

/// Runs body(begin, end) over a partition of [0, n). Calls made from inside
/// a worker execute inline, so nested parallelism never oversubscribes.
/// Every site that needs bitwise-reproducible results must make each
/// index's work independent of the partitioning (the callers here do).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace stopbound
