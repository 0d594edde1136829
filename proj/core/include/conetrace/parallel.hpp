#pragma once

#include <cstddef>
#include <functional>

namespace conetrace {

// Worker count used by the library; 0 means hardware concurrency.
void set_thread_count(int n);
int thread_count();

// Calls body(i) for i in [0, n) across worker threads. Each index is handled
// exactly once; callers store results per index and reduce them in order, so
// output does not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace conetrace
