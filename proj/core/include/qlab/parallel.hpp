#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace qlab {

// Runs `work(begin, end, block_index)` over [0, n) split into a FIXED number of
// blocks, so per-block partial results (reduced in block order by the caller)
// are identical for any worker count.
template <class T, class Work>
std::vector<T> run_blocks(long n, int jobs, Work work, int n_blocks = 256) {
    if (n <= 0) return {};
    if (n_blocks > n) n_blocks = static_cast<int>(n);
    std::vector<T> results(n_blocks);
    std::atomic<int> next{0};
    auto runner = [&]() {
        for (;;) {
            const int b = next.fetch_add(1);
            if (b >= n_blocks) return;
            const long lo = n * b / n_blocks;
            const long hi = n * (b + 1) / n_blocks;
            results[b] = work(lo, hi, b);
        }
    };
    if (jobs <= 1) {
        runner();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(runner);
        for (auto& th : pool) th.join();
    }
    return results;
}

}  // namespace qlab
