#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace percolab {

// Runs fn(replicate_index) for every index in [0, n) on a fixed pool of
// workers. Each result lands in a slot keyed by its replicate index, so the
// output is byte-identical for any worker count; only wall time changes.
template <class T, class Fn>
std::vector<T> run_replicates(std::uint64_t n, unsigned workers, Fn&& fn) {
    std::vector<T> results(n);
    if (n == 0) return results;
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    if (workers == 1) {
        for (std::uint64_t i = 0; i < n; ++i) results[i] = fn(i);
        return results;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto body = [&]() {
        for (;;) {
            std::uint64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n || failed.load(std::memory_order_relaxed)) return;
            try {
                results[i] = fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (failed) std::rethrow_exception(error);
    return results;
}

}  // namespace percolab
