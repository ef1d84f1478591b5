#pragma once

#include <cstddef>
#include <functional>

namespace oddsmith {

/// Worker count: ODDSMITH_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (0 or unset means auto).
std::size_t thread_count();

/// Runs task(i) for i in [0, n). Work units must write only to their own
/// output slot; the result is then independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

}  // namespace oddsmith
