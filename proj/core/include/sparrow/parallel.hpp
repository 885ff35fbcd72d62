#pragma once

#include <cstdint>
#include <functional>

namespace sparrow {

/// Splits [0, n) into contiguous chunks over `threads` workers
/// (0 = hardware concurrency). fn must be safe to call concurrently
/// for distinct indices.
void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace sparrow
