#pragma once

#include <cstddef>
#include <functional>

namespace aelab {

/// Worker count: AELAB_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count();

/// Calls body(i) for every i in [0, n). Work items are claimed dynamically, so
/// callers must write results into per-item slots and reduce them in index
/// order afterwards to stay independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace aelab
