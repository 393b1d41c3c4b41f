#pragma once

// Data-parallel fan-out over index ranges. Results must be written to
// pre-assigned slots so the outcome is independent of the thread count;
// PATCHLUM_THREADS caps the pool (absent = hardware default).

#include <cstddef>
#include <functional>

namespace patchlum {

unsigned worker_count();

// Calls body(i) for i in [0, n), partitioned across workers. body must only
// write to slots owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace patchlum
