#pragma once

#include <cstdint>
#include <functional>

namespace aqec {

// Worker cap: AQEC_THREADS if set (min 1), else hardware concurrency.
int thread_count();

// Runs fn(begin..end) split across thread_count() workers; fn(lo, hi) handles [lo, hi).
// Falls back to a direct call when a single worker suffices.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace aqec
