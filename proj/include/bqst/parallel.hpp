#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace bqst {

namespace detail {
inline std::atomic<int>& thread_override() {
    static std::atomic<int> n{0};
    return n;
}
inline bool& in_parallel_region() {
    thread_local bool flag = false;
    return flag;
}
}  // namespace detail

/// Sets the worker budget for parallel loops. 0 restores the default
/// (BQST_THREADS environment variable, else hardware concurrency).
inline void set_thread_count(int n) { detail::thread_override().store(n < 0 ? 0 : n); }

inline int thread_count() {
    int n = detail::thread_override().load();
    if (n > 0) return n;
    if (const char* env = std::getenv("BQST_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs f(i) for i in [0, n). Work is handed out in blocks and each call
/// writes only results addressed by its own index, so the outcome is
/// identical at any worker count. Nested calls run serially inline.
template <typename F>
void parallel_for(std::size_t n, F&& f, std::size_t min_parallel = 32) {
    if (n == 0) return;
    const int workers = thread_count();
    if (workers <= 1 || n < min_parallel || detail::in_parallel_region()) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    const std::size_t block = std::max<std::size_t>(1, n / (4 * static_cast<std::size_t>(workers)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        detail::in_parallel_region() = true;
        for (;;) {
            const std::size_t begin = next.fetch_add(block);
            if (begin >= n) break;
            const std::size_t end = std::min(n, begin + block);
            for (std::size_t i = begin; i < end; ++i) f(i);
        }
        detail::in_parallel_region() = false;
    };
    const std::size_t nblocks = (n + block - 1) / block;
    const int spawn = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), nblocks));
    std::vector<std::thread> pool;
    pool.reserve(spawn > 0 ? spawn - 1 : 0);
    for (int t = 1; t < spawn; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace bqst
