#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace orifield {

/// Worker count: explicit value if positive, else ORIFIELD_THREADS, else 1.
int resolve_threads(int requested);

/// Runs body(begin, end) over contiguous chunks of [0, count). Chunk results
/// must be written to disjoint outputs; no reduction happens here, so results
/// do not depend on the thread count.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1, threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
}

}  // namespace orifield
