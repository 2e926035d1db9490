#pragma once

#include <cstddef>
#include <functional>

namespace tameproj {

/// Worker count: hardware concurrency, capped by TAMEPROJ_THREADS when set.
std::size_t thread_count();

/// Runs body(i) for i in [0, count). Work is split into contiguous index
/// blocks; callers write results by index so output never depends on the
/// thread schedule. The first exception thrown by a body is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tameproj
