#pragma once

#include <cstddef>
#include <functional>

namespace rcd {

/// Worker count from RCD_THREADS, else hardware concurrency (at least 1).
std::size_t configured_threads();

/// Calls body(i) for i in [0, count) on up to `threads` workers. Each index
/// runs exactly once; the first exception thrown is rethrown after all
/// workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = configured_threads());

}  // namespace rcd
