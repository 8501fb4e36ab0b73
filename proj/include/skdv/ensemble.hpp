#pragma once

#include <functional>

namespace skdv {

// Worker count resolution: explicit request > SKDV_THREADS > hardware.
int resolve_thread_count(int requested);

// fn(i) for i in [0, n), spread across min(threads, n) workers; the first
// exception thrown by any worker is rethrown after the join.
void parallel_paths(int n, int threads, const std::function<void(int)>& fn);

}  // namespace skdv
