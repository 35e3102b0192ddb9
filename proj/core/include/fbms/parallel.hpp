#pragma once

#include <cstddef>
#include <functional>

namespace fbms {

/// Worker count for internal loops: FBMS_THREADS if set and positive,
/// otherwise the hardware concurrency (at least 1).
unsigned thread_count();

/// Runs body(i) for i in [0, n), split into contiguous chunks across
/// thread_count() threads. body must only write to slots indexed by i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fbms
