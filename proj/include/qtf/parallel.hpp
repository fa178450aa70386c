#ifndef QTF_PARALLEL_HPP
#define QTF_PARALLEL_HPP

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace qtf {

// Worker count: hardware concurrency capped by the QTF_THREADS env var.
// Results never depend on it: loops write disjoint ranges and all
// reductions run in a fixed blocked order.
inline int max_workers() {
    static const int cached = [] {
        unsigned hw = std::thread::hardware_concurrency();
        long n = hw == 0 ? 1 : static_cast<long>(hw);
        if (const char* env = std::getenv("QTF_THREADS")) {
            long cap = std::strtol(env, nullptr, 10);
            if (cap >= 1 && cap < n) n = cap;
        }
        return static_cast<int>(n);
    }();
    return cached;
}

// Static block split of [0,n). Stays serial below the threshold; the
// split depends only on n and the worker count.
template <class F>
void parallel_for(long n, F&& body, long grain = 32768) {
    int workers = max_workers();
    if (workers <= 1 || n < grain) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    long nblk = workers;
    long chunk = (n + nblk - 1) / nblk;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nblk - 1));
    for (long b = 1; b < nblk; ++b) {
        long lo = b * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] {
            for (long i = lo; i < hi; ++i) body(i);
        });
    }
    for (long i = 0; i < std::min(chunk, n); ++i) body(i);
    for (auto& t : pool) t.join();
}

// Deterministic pairwise-tree sum over term(i), i in [0,n).
template <class F>
double tree_sum(long lo, long hi, F&& term) {
    const long n = hi - lo;
    if (n <= 64) {
        double s = 0.0;
        for (long i = lo; i < hi; ++i) s += term(i);
        return s;
    }
    long mid = lo + n / 2;
    return tree_sum(lo, mid, term) + tree_sum(mid, hi, term);
}

template <class F>
double tree_sum(long n, F&& term) {
    return tree_sum<F>(0, n, std::forward<F>(term));
}

}  // namespace qtf

#endif
