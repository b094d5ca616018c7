#pragma once

#include <cstddef>
#include <functional>

namespace shrinkcov {

/// 0 maps to std::thread::hardware_concurrency() (at least 1).
unsigned resolve_workers(unsigned requested);

/// Calls body(i) for every i in [0, count) on up to `workers` threads.
/// Work items must not share mutable state. If any call throws, no further
/// items are started and the exception from the lowest failing index is
/// rethrown.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace shrinkcov
