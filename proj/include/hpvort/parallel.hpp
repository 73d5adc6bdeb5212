#pragma once
/// @file parallel.hpp
/// Static-partition parallel loop. Each index is processed by exactly one
/// worker, so results never depend on the thread count.

#include <cstddef>
#include <functional>

namespace hpv {

/// Worker count from HPVORT_THREADS (default 1).
int thread_count();

/// Calls body(i) for i in [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hpv
