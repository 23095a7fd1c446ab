#pragma once

#include <cstddef>
#include <functional>

namespace stencil_lab {

/// Worker count: STENCIL_LAB_THREADS if set, otherwise hardware concurrency.
unsigned worker_count();

/// Calls body(i) for i in [0, n) across worker_count() threads in contiguous chunks.
/// The first exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace stencil_lab
