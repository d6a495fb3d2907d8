#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace pfk {

// Worker cap: PFAFFKIT_THREADS when set to a positive number, otherwise the
// hardware concurrency. Unparsable or zero values fall back to 1.
inline std::size_t thread_budget() {
    if (const char* env = std::getenv("PFAFFKIT_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        return 1;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Runs fn(i) for i in [0, n) split into contiguous chunks, one thread per
// chunk. Each call must touch only state indexed by its own i, so the result
// does not depend on the thread count.
template <class F>
void parallel_for(std::size_t n, F&& fn, std::size_t max_threads = thread_budget()) {
    if (n == 0) return;
    std::size_t workers = max_threads < n ? max_threads : n;
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = n / workers, rem = n % workers, start = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t len = chunk + (w < rem ? 1 : 0);
        pool.emplace_back([&fn, start, len] {
            for (std::size_t i = start; i < start + len; ++i) fn(i);
        });
        start += len;
    }
    for (auto& t : pool) t.join();
}

}  // namespace pfk
