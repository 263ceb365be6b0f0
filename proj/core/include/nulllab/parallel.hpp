#pragma once

#include <cstddef>
#include <functional>

namespace nulllab {

// Worker count resolution: explicit request > NULLLAB_THREADS > hardware.
// Always at least 1.
unsigned thread_budget(unsigned requested = 0);

// Runs fn(0..count-1) on up to `threads` workers. Iteration order across
// workers is unspecified; callers must write results into per-index slots
// and aggregate afterwards in index order. The first exception thrown by
// any worker is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace nulllab
