#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <span>
#include <thread>
#include <vector>

namespace yule {

// Worker count: VC_THREADS caps it, default all cores.
inline int thread_count() {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("VC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v < static_cast<long>(n)) n = static_cast<unsigned>(v);
    }
    return static_cast<int>(n);
}

// Runs fn(chunk) for chunk = 0..n_chunks-1 on a small pool. Chunk boundaries
// are fixed by the caller, so any reduction over per-chunk results in chunk
// order is independent of the worker count.
inline void parallel_chunks(int n_chunks, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_count(), n_chunks);
    if (workers <= 1) {
        for (int i = 0; i < n_chunks; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n_chunks) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

// Deterministic pairwise summation; order depends only on the input layout.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace yule
