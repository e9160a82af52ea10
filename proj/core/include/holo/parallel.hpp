#pragma once

#include <cstdint>
#include <functional>

namespace holo {

/// Maximum worker threads used by parallel_for. 0 restores the hardware default.
void set_max_threads(int n);
int max_threads();

/// Runs fn(begin, end) over disjoint chunks of [begin, end), possibly on a
/// shared thread pool. Chunk boundaries depend only on the range and the
/// configured thread count, and every element is written by exactly one
/// chunk, so results are bitwise independent of how chunks are scheduled.
/// Nested calls from inside a worker run inline on the calling thread.
void parallel_for(int64_t begin, int64_t end, const std::function<void(int64_t, int64_t)>& fn);

}  // namespace holo
