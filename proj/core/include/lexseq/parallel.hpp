#pragma once

#include <cstddef>
#include <functional>

namespace lexseq {

/// Worker count: LEXSEQ_THREADS if set (>=1), otherwise hardware concurrency.
std::size_t thread_budget();

/// Runs fn(begin, end) over a blocked partition of [0, n), possibly on
/// several threads. Blocks are disjoint, so writers to per-index slots
/// need no synchronization; results are identical to a serial run.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace lexseq
