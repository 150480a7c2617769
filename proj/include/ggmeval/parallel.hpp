#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ggm {

// Worker count: min(hardware_concurrency, GGM_EVAL_THREADS when set).
int max_threads();

// Runs fn(i) for i in [0, n). Work is handed out in fixed-size chunks; each
// index is processed exactly once and results must be written to disjoint
// slots, so output is independent of the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ggm
