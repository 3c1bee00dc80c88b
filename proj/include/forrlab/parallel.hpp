#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace forrlab {

// Runs fn(task) for every task in [0, n_tasks). Each task must write only to
// its own output slot; together with per-task rng streams this keeps results
// independent of the worker count and of scheduling order.
inline void parallel_tasks(uint64_t n_tasks, uint32_t workers,
                           const std::function<void(uint64_t)>& fn) {
    if (workers <= 1 || n_tasks <= 1) {
        for (uint64_t t = 0; t < n_tasks; ++t) fn(t);
        return;
    }
    std::atomic<uint64_t> next{0};
    auto drain = [&] {
        for (;;) {
            const uint64_t t = next.fetch_add(1);
            if (t >= n_tasks) return;
            fn(t);
        }
    };
    std::vector<std::thread> pool;
    const uint32_t spawn = workers > n_tasks ? uint32_t(n_tasks) : workers;
    pool.reserve(spawn);
    for (uint32_t w = 0; w < spawn; ++w) pool.emplace_back(drain);
    for (auto& th : pool) th.join();
}

inline uint32_t default_workers() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1u : uint32_t(hc);
}

}  // namespace forrlab
