#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace hardy {

// Worker-pool cap shared by all parallel loops. Defaults to the hardware
// concurrency; the CLI and the HARDY_THREADS env var override it.
int max_threads();
void set_max_threads(int n); // n <= 0 restores the hardware default

// Sum with a fixed binary reduction tree. The tree shape depends only on the
// input length, so results are identical for any thread count.
double pairwise_sum(std::span<const double> xs);

// Runs fn(begin, end) over disjoint chunks of [0, n). The chunk grid is a
// function of n and min_grain only; callers must write results by index so
// that output does not depend on scheduling. Nested calls run sequentially.
void parallel_for(std::size_t n, std::size_t min_grain,
                  const std::function<void(std::size_t, std::size_t)>& fn);

} // namespace hardy
