#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace bmlab::par {

// Worker count for all parallel loops.  Set once by the CLI from --threads
// (or the BM_LAB_THREADS fallback); defaults to machine parallelism.
inline int& thread_budget() {
    static int budget = [] {
        if (const char* env = std::getenv("BM_LAB_THREADS")) {
            const int v = std::atoi(env);
            if (v > 0) return v;
        }
        const unsigned hc = std::thread::hardware_concurrency();
        return hc > 0 ? static_cast<int>(hc) : 1;
    }();
    return budget;
}

inline void set_thread_budget(int n) {
    if (n > 0) thread_budget() = n;
}

// Runs fn(i) for i in [0, n).  Work is claimed in fixed-size blocks from an
// atomic cursor, so any writes fn makes must go to slots owned by i alone;
// result determinism then does not depend on the thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         std::size_t block = 1) {
    if (n == 0) return;
    const int workers = std::min<std::size_t>(thread_budget(), (n + block - 1) / block);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::mutex mu;
    std::size_t cursor = 0;
    std::exception_ptr first_error;
    auto body = [&] {
        for (;;) {
            std::size_t lo, hi;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (first_error || cursor >= n) return;
                lo = cursor;
                hi = std::min(n, lo + block);
                cursor = hi;
            }
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace bmlab::par
