#pragma once

#include <cstddef>
#include <functional>

namespace polycap {

/// Worker count: POLYCAP_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_limit();

/// Runs body(i) for i in [0, count) on up to thread_limit() threads.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace polycap
