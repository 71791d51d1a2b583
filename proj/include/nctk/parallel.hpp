#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace nctk {

// Thread count from an explicit request, else NCTK_THREADS, else 1.
int resolve_threads(int requested);

// Calls fn(i) for i in [0, n) on up to `threads` workers. Work is split into
// contiguous blocks by index, so results stored by index do not depend on
// the thread count. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace nctk
