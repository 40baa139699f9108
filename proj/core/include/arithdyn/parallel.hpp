#pragma once

#include <cstddef>
#include <functional>

namespace arithdyn {

// Worker count used when a caller passes 0.
unsigned default_workers();

// Runs fn(i) for every i in [0, n) on up to `workers` threads. Indices are
// claimed in increasing order. After a failure no new index is claimed, and
// the exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn);

}  // namespace arithdyn
