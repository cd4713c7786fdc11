#ifndef EPIMIT_PARALLEL_HPP
#define EPIMIT_PARALLEL_HPP

#include <functional>

namespace epimit {

// Worker cap: EPIMIT_THREADS when set (minimum 1), hardware concurrency
// otherwise.
int thread_cap();

// Runs fn(i) for i in [begin, end) on up to thread_cap() workers. Work items
// must only write to their own slots; results are then independent of the
// thread count.
void parallel_for(long begin, long end, const std::function<void(long)>& fn);

} // namespace epimit

#endif
