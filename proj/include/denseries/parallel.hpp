#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace denseries {

//! Runs fn(i) for i in [0, count) on up to `threads` worker threads.
//! Work items must be independent; results keyed by index stay deterministic
//! regardless of scheduling. threads <= 1 runs inline. The first exception
//! thrown by any item is rethrown on the caller's thread.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& fn) {
    if (count == 0)
        return;
    if (threads == 0)
        threads = std::thread::hardware_concurrency();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads ? threads : 1, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load())
                    return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true))
                        error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace denseries
