#pragma once

#include <functional>

namespace cforge {

/// Worker count: hardware concurrency, capped by the CFORGE_THREADS
/// environment variable when it is set to a positive integer.
int thread_count();

/// Runs body(i) for i in [0, count) across thread_count() workers in
/// contiguous blocks. Each index is visited exactly once, so results written
/// to per-index slots are independent of the thread count.
void parallel_for(int count, const std::function<void(int)>& body);

}  // namespace cforge
