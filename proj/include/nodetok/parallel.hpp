#pragma once

#include <cstddef>
#include <functional>

namespace nodetok {

/// Worker count: hardware concurrency, capped by the NTPE_THREADS
/// environment variable when it is set to a positive integer.
std::size_t worker_count();

/// Runs body(worker, begin, end) over contiguous chunks of [0, n). Each
/// index is visited exactly once. Runs inline when one worker suffices.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t worker, std::size_t begin, std::size_t end)>& body);

}  // namespace nodetok
