#pragma once

#include <cstddef>
#include <functional>

namespace assocfam {

/// Worker count: ASSOCFAM_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned thread_count();

/// Runs fn(i) for i in [0, n). Each index is visited exactly once; the order
/// is unspecified, so fn must only write to slot i of its output.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace assocfam
