#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace dpln {

// Worker count: DPLN_THREADS if set (>=1), else hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("DPLN_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Static block partition of [0, n); fn(i) must be safe to run concurrently
// for distinct i. Results written by index stay deterministic.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned workers = std::min<std::size_t>(worker_count(), n ? n : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace dpln
