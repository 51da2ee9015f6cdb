#pragma once

#include <cstddef>
#include <functional>

namespace cyclone {

/// Worker count: CYCLONE_THREADS when set (clamped to [1, 256]), otherwise
/// the hardware concurrency. Read at call time, not cached.
int thread_budget();

/// Run fn(0..n-1) across the thread budget. Each index is independent and
/// writes only its own slot, so results are identical for any worker count.
/// The first exception thrown by any index is rethrown after all workers
/// join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace cyclone
