#pragma once

namespace hmr {

// Thin wrappers so callers don't need _OPENMP guards.  All parallel loops
// in this codebase write disjoint output slots and keep reductions serial,
// so results are identical for any thread count.
void set_thread_count(int n);  // n <= 0 leaves the runtime default
int max_threads();

}  // namespace hmr
