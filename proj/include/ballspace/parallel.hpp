#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ballspace {

// Worker cap: set_threads() > BALLSPACE_THREADS env > hardware_concurrency.
inline int& thread_override() {
    static int v = 0;
    return v;
}
inline void set_threads(int n) { thread_override() = n; }

inline int worker_count() {
    if (thread_override() > 0) return thread_override();
    if (const char* env = std::getenv("BALLSPACE_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? int(hc) : 1;
}

/* Run body(i) for i in [0, count).  Each index is claimed atomically, every
 * result must be written to a slot addressed by i only; combining slots in
 * index order afterwards makes the computation independent of scheduling. */
template <class Body>
void parallel_for(std::int64_t count, const Body& body) {
    int workers = worker_count();
    if (workers <= 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto run = [&] {
        for (;;) {
            std::int64_t i = next.fetch_add(1);
            if (i >= count) break;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    int spawn = int(std::min<std::int64_t>(workers, count));
    pool.reserve(spawn - 1);
    for (int t = 0; t < spawn - 1; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

/* Deterministic MC reduction: `count` samples split into fixed blocks; block
 * partial sums are accumulated independently, then combined in block order.
 * Result is bit-identical for any worker count.  term(i) may return several
 * accumulands (value, value^2, ...) via a small fixed-size array. */
template <int W, class Term>
std::array<double, W> blocked_sum(std::int64_t count, const Term& term) {
    constexpr std::int64_t kBlock = 4096;
    std::int64_t nblocks = (count + kBlock - 1) / kBlock;
    std::vector<std::array<double, W>> partial(nblocks);
    parallel_for(nblocks, [&](std::int64_t b) {
        std::array<double, W> acc{};
        std::int64_t lo = b * kBlock, hi = std::min(count, lo + kBlock);
        for (std::int64_t i = lo; i < hi; ++i) {
            std::array<double, W> t = term(i);
            for (int w = 0; w < W; ++w) acc[w] += t[w];
        }
        partial[b] = acc;
    });
    std::array<double, W> total{};
    for (std::int64_t b = 0; b < nblocks; ++b)
        for (int w = 0; w < W; ++w) total[w] += partial[b][w];
    return total;
}

}  // namespace ballspace
