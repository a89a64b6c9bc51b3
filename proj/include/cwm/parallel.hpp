#pragma once

#include <cstddef>
#include <functional>

namespace cwm {

// Worker count from CWM_THREADS (0 or unset = hardware concurrency).
unsigned thread_count();

// Runs body(i) for i in [0, count) on up to thread_count() threads. Tasks must
// write only to their own slot; the first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace cwm
