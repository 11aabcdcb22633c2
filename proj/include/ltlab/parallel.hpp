#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace ltlab::parallel {

std::size_t worker_count();

// Runs per_block(block_index, begin, end) over fixed-size blocks of
// [0, n_items). Block boundaries do not depend on the worker count, so any
// reduction that combines per-block results in block order is bit-identical
// to a sequential run.
template <class PerBlock>
void for_each_block(std::size_t n_items, std::size_t block_size, PerBlock per_block) {
    if (n_items == 0) return;
    const std::size_t n_blocks = (n_items + block_size - 1) / block_size;
    const std::size_t workers = std::min(worker_count(), n_blocks);
    if (workers <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) {
            const std::size_t lo = b * block_size;
            per_block(b, lo, std::min(lo + block_size, n_items));
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1)) {
                const std::size_t lo = b * block_size;
                per_block(b, lo, std::min(lo + block_size, n_items));
            }
        });
    }
    for (auto& t : pool) t.join();
}

inline constexpr std::size_t default_block = 64;

// Deterministic sum of per_item(i) (a fixed-width vector of accumulators):
// blocks accumulate sequentially, block sums combine in index order.
template <class PerItem>
Eigen::ArrayXd reduce_sum(std::size_t n_items, Eigen::Index width, PerItem per_item) {
    const std::size_t n_blocks = (n_items + default_block - 1) / default_block;
    std::vector<Eigen::ArrayXd> partial(n_blocks, Eigen::ArrayXd::Zero(width));
    for_each_block(n_items, default_block, [&](std::size_t b, std::size_t lo, std::size_t hi) {
        Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(width);
        for (std::size_t i = lo; i < hi; ++i) acc += per_item(i);
        partial[b] = acc;
    });
    Eigen::ArrayXd total = Eigen::ArrayXd::Zero(width);
    for (const auto& p : partial) total += p;
    return total;
}

// Deterministic gather: slot i receives per_item(i).
template <class PerItem>
Eigen::ArrayXd collect(std::size_t n_items, PerItem per_item) {
    Eigen::ArrayXd out(static_cast<Eigen::Index>(n_items));
    for_each_block(n_items, default_block, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) out[static_cast<Eigen::Index>(i)] = per_item(i);
    });
    return out;
}

}  // namespace ltlab::parallel
