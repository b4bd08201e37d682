#pragma once

#include <cstddef>
#include <functional>

namespace fwm {

// Worker cap. Defaults to FWMSIM_THREADS when set, else hardware concurrency.
int thread_count();
void set_thread_count(int n);

// Runs body(i) for i in [0, n). Each index is handled exactly once; callers
// write results by index so the outcome never depends on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fwm
