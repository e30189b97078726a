#pragma once

#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace kakeya {

inline unsigned worker_count() {
    if (const char* env = std::getenv("KAKEYA_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Static-partition parallel map. fn(i) must write only to slot i (or other
/// per-index storage), so the result is bitwise identical to a sequential run
/// for any worker count.
template <class F>
void parallel_for(std::size_t n, F&& fn) {
    const unsigned workers = worker_count();
    if (workers <= 1 || n < 2 * workers) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        if (lo >= n) break;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace kakeya
