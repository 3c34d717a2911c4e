#pragma once

#include <cstddef>
#include <functional>

namespace topiclear {

// Worker count used by row-parallel loops (default 1). Work is split into
// contiguous static chunks and every row is computed independently, so
// outputs do not depend on the worker count.
void set_thread_count(unsigned n);
unsigned thread_count();

void parallel_for(std::size_t n, const std::function<void(std::size_t begin, std::size_t end)>& body);

}  // namespace topiclear
