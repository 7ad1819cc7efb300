#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace suprec {

inline int resolve_jobs(int jobs) {
    if (jobs > 0) return jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, count) across `jobs` threads. Work is split into
/// contiguous chunks by index; fn must depend only on i, never on the worker,
/// so results are identical for any job count.
template <typename Fn>
void parallel_for(std::uint64_t count, int jobs, Fn&& fn) {
    const int j = resolve_jobs(jobs);
    if (j <= 1 || count < 2) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const auto workers = static_cast<std::uint64_t>(j);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t wkr = 0; wkr < workers; ++wkr) {
        pool.emplace_back([&, wkr] {
            const std::uint64_t lo = count * wkr / workers;
            const std::uint64_t hi = count * (wkr + 1) / workers;
            for (std::uint64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

/// Counts the i in [0, count) for which pred(i) is true. Exact integer
/// reduction, so the total is independent of the partition.
template <typename Pred>
std::uint64_t parallel_count(std::uint64_t count, int jobs, Pred&& pred) {
    const int j = resolve_jobs(jobs);
    const auto workers = static_cast<std::uint64_t>(j <= 1 ? 1 : j);
    std::vector<std::uint64_t> partial(workers, 0);
    if (workers == 1) {
        for (std::uint64_t i = 0; i < count; ++i)
            if (pred(i)) ++partial[0];
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::uint64_t wkr = 0; wkr < workers; ++wkr) {
            pool.emplace_back([&, wkr] {
                const std::uint64_t lo = count * wkr / workers;
                const std::uint64_t hi = count * (wkr + 1) / workers;
                std::uint64_t local = 0;
                for (std::uint64_t i = lo; i < hi; ++i)
                    if (pred(i)) ++local;
                partial[wkr] = local;
            });
        }
        for (auto& t : pool) t.join();
    }
    std::uint64_t total = 0;
    for (auto c : partial) total += c;
    return total;
}

} // namespace suprec
