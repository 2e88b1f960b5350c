#pragma once

#include <cstddef>
#include <functional>

namespace thermoporo {

/// Worker count used by parallel_for: an explicit set_thread_count() value,
/// else THERMOPORO_THREADS, else the hardware concurrency.
[[nodiscard]] int thread_count();

/// 0 restores the environment/hardware default.
void set_thread_count(int n);

/// Runs fn(0..count-1), possibly concurrently. Each index runs exactly once, so
/// results written to per-index slots are independent of the thread count.
/// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace thermoporo
