#include "epimit/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace epimit {

int thread_cap()
{
    if (const char* env = std::getenv("EPIMIT_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1)
            return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(long begin, long end, const std::function<void(long)>& fn)
{
    const long count = end - begin;
    if (count <= 0)
        return;
    const int workers = static_cast<int>(std::min<long>(thread_cap(), count));
    if (workers <= 1) {
        for (long i = begin; i < end; ++i)
            fn(i);
        return;
    }
    std::atomic<long> next(begin);
    std::exception_ptr first_error;
    std::atomic<bool> failed(false);
    auto run = [&] {
        for (;;) {
            long i = next.fetch_add(1);
            if (i >= end || failed.load())
                return;
            try {
                fn(i);
            } catch (...) {
                if (!failed.exchange(true))
                    first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back(run);
    for (auto& th : pool)
        th.join();
    if (failed.load() && first_error)
        std::rethrow_exception(first_error);
}

} // namespace epimit
