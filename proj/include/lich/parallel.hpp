#pragma once

#include <cstddef>
#include <functional>

namespace lich {

// Worker count for node-parallel loops: LICH_THREADS if set (≥1), otherwise
// the hardware concurrency.
unsigned thread_count() noexcept;

// Calls body(begin, end) over disjoint chunks covering [0, n). The body must
// only write to locations owned by its chunk.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace lich
