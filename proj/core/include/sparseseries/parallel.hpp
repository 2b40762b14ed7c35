#pragma once

#include <cstddef>
#include <functional>

namespace sparseseries {

/// Worker cap: min(hardware_concurrency, SPARSE_SERIES_THREADS when set).
/// A value of 1 runs everything inline.
std::size_t thread_cap();

/// Runs fn(i) for i in [0, n) on up to thread_cap() workers. Exceptions
/// propagate (first one wins); results must be written to pre-sized slots so
/// assembly stays deterministic regardless of execution order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace sparseseries
