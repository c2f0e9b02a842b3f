#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace snlab::detail {

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// processed exactly once and results must be written to per-index slots, so
// the outcome is identical for any worker count or interleaving.
template <typename F>
void parallel_for(std::uint64_t count, int threads, F&& body) {
    if (threads <= 1 || count < 2) {
        for (std::uint64_t i = 0; i < count; ++i) body(i);
        return;
    }
    const auto workers = static_cast<unsigned>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), count));
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= count || failed.load(std::memory_order_relaxed)) return;
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace snlab::detail
