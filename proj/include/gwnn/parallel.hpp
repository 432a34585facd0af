#pragma once

#include <cstddef>
#include <functional>

namespace gwnn {

// Worker cap shared by all kernels. 0 means "hardware concurrency".
void set_thread_count(std::size_t threads);
std::size_t thread_count();

// Splits [begin, end) into contiguous chunks and runs fn(chunk_begin,
// chunk_end) on each. Chunks never overlap, so kernels that write one
// output row per index stay bit-identical for any thread count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t, std::size_t)>& fn,
                  std::size_t min_chunk = 64);

}  // namespace gwnn
