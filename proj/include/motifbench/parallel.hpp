#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace motifbench {

inline unsigned hardware_threads() noexcept {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

// Splits [0, n) into `threads` contiguous chunks and runs fn(begin, end, tid)
// on each. Chunk boundaries depend only on (n, threads). The first exception
// raised by any worker is rethrown on the caller.
template <typename Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) {
        fn(std::size_t{0}, n, 0u);
        return;
    }
    const std::size_t t = std::min<std::size_t>(threads, n);
    std::vector<std::thread> workers;
    workers.reserve(t);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t i = 0; i < t; ++i) {
        const std::size_t begin = n * i / t;
        const std::size_t end = n * (i + 1) / t;
        workers.emplace_back([&, begin, end, i] {
            try {
                fn(begin, end, static_cast<unsigned>(i));
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);
}

// Number of chunks parallel_chunks will actually use.
inline std::size_t chunk_count(std::size_t n, unsigned threads) noexcept {
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) return 1;
    return std::min<std::size_t>(threads, n);
}

}  // namespace motifbench
