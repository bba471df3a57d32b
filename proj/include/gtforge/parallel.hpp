#pragma once

#include <cstddef>
#include <functional>

namespace gtforge {

/// Worker count: GT_FORGE_THREADS when set to a positive integer, else the
/// hardware concurrency. Read on every call.
size_t worker_count();

/// Runs fn(i) for i in [0, n) on up to worker_count() threads. Callers must
/// write results into per-index slots; ordering of side effects is
/// unspecified. The exception thrown by the lowest failing index is
/// rethrown.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

}  // namespace gtforge
