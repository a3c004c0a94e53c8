#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace qpsh {

/// Number of fixed work partitions for Monte-Carlo loops.  Results depend on
/// this constant, never on the number of hardware threads.
inline constexpr std::size_t kPartitions = 16;

/// Runs fn(p) for p in [0, count), concurrently when hardware allows.  Each
/// call must write only to its own output slot.
inline void for_each_partition(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t p = 0; p < count; ++p) fn(p);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t p = w; p < count; p += workers) fn(p);
        });
    for (auto& t : pool) t.join();
}

/// [begin, end) of partition p when `total` items are split `parts` ways.
inline std::pair<std::size_t, std::size_t> partition_range(std::size_t total, std::size_t parts, std::size_t p) {
    const std::size_t base = total / parts;
    const std::size_t extra = total % parts;
    const std::size_t begin = p * base + std::min(p, extra);
    return {begin, begin + base + (p < extra ? 1 : 0)};
}

}  // namespace qpsh
