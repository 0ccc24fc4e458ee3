#pragma once

#include <cstddef>
#include <functional>

namespace repclust {

/// Worker count used by parallel_for. 0 selects the REPCLUST_THREADS
/// environment variable, falling back to 1.
void set_thread_count(std::size_t n);
std::size_t thread_count();

/// Runs fn(i) for i in [0, n) over contiguous blocks. Callers write only to
/// per-index slots and reduce serially afterwards, so results never depend
/// on the worker count. The first exception thrown by any worker is
/// rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace repclust
