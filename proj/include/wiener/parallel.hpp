#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wiener {

inline int default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Calls fn(i) for i in [0, n) on up to `workers` threads. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
    const auto threads = static_cast<std::size_t>(std::clamp<std::int64_t>(workers, 1, static_cast<std::int64_t>(std::max<std::size_t>(n, 1))));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (error) std::rethrow_exception(error);
}

inline constexpr std::uint64_t kReductionBlock = 4096;

/**
 * Deterministic parallel reduction over [0, count): the range is cut into fixed blocks of
 * kReductionBlock items, block_fn(begin, end) produces one partial per block, and partials are
 * combined in block order. The result does not depend on `workers`.
 */
template <class T, class BlockFn, class Combine>
T block_reduce(std::uint64_t count, int workers, T init, BlockFn&& block_fn, Combine&& combine) {
    const std::uint64_t blocks = (count + kReductionBlock - 1) / kReductionBlock;
    std::vector<T> partial(static_cast<std::size_t>(blocks), init);
    parallel_for(static_cast<std::size_t>(blocks), workers, [&](std::size_t b) {
        const std::uint64_t begin = b * kReductionBlock;
        const std::uint64_t end = std::min(count, begin + kReductionBlock);
        partial[b] = block_fn(begin, end);
    });
    T acc = init;
    for (const auto& p : partial) combine(acc, p);
    return acc;
}

}  // namespace wiener
