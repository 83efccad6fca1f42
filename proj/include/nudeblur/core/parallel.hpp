#pragma once

#include <cstddef>
#include <functional>

namespace nudeblur {

/// Worker count used by parallel_for; 0 selects the hardware concurrency.
void set_thread_count(unsigned count);
unsigned thread_count();

/// Runs body(i) for i in [0, n) across worker threads. Each index runs exactly
/// once; callers write results by index so output order never depends on
/// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace nudeblur
