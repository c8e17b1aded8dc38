#pragma once

#include <cstdint>
#include <functional>

namespace scenekit {

// Process-wide worker count. 0 means "use hardware concurrency"; the CLI
// sets it from --threads / SCENEKIT_THREADS before any work starts.
void set_thread_count(int threads);
int thread_count();

// Runs fn(begin, end) over contiguous chunks of [0, n). Each index is
// processed exactly once and chunk boundaries depend only on n and the
// worker count, so writes to preallocated per-index slots are deterministic.
// Reductions stay with the caller, in index order.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

} // namespace scenekit
