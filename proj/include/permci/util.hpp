#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace permci {

// Run fn(begin, end) over [0, count) split into contiguous chunks, one per
// worker. Workers write to disjoint indices only, so the result is identical
// for any thread count.
inline void parallel_chunks(std::size_t count, unsigned threads,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        fn(0, count);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, count);
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace permci
