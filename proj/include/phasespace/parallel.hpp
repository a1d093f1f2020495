#pragma once

#include <cstddef>
#include <functional>

namespace phasespace {

/// Number of worker threads: PHASESPACE_THREADS if set, else
/// hardware_concurrency, at least 1.
int thread_count();

/// Runs fn(begin, end, worker_index) over a partition of [0, n) into
/// contiguous ranges, one per worker. Serial (same thread) when only one
/// worker is active, so single-thread runs have no scheduling jitter.
/// Workers write to disjoint output by index; reductions combine per-worker
/// partials in worker order, keeping results independent of timing.
void parallel_for(size_t n, const std::function<void(size_t, size_t, int)>& fn);

}  // namespace phasespace
