#pragma once

#include <cstddef>
#include <functional>

namespace starpls {

// Thread budget shared by every parallel loop. 0 means "use the hardware
// concurrency". The budget only affects scheduling; all numerical output is
// a pure function of the configuration and seeds.
void set_thread_budget(int n);
int thread_budget();

// Runs fn(i) for i in [0, n). Work is split into contiguous static blocks;
// exceptions from workers are rethrown on the calling thread. Nested calls
// degrade to serial execution.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace starpls
