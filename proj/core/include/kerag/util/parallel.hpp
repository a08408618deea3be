#pragma once
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace kerag {

// Runs fn(0..n-1) on a bounded worker pool. Callers store results by index,
// so input order is preserved regardless of scheduling. fn must not throw.
inline void parallel_for_indexed(size_t n, int workers, const std::function<void(size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::thread> pool;
    int count = std::min<int>(workers, static_cast<int>(n));
    pool.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

inline int default_workers() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace kerag
