#pragma once

// Deterministic parallel helpers. Work splits into fixed-size chunks whose
// boundaries depend only on the range (never on the worker count), results
// are stored by chunk index and merged in order, so the output is identical
// for any number of threads.

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#include "dioman/rational.hpp"

namespace dioman {

inline Int parallel_chunk_size(Int begin, Int end) {
    Int total = end - begin;
    return std::max<Int>(1, (total + 255) / 256);
}

template <class T, class Fn>
std::vector<T> parallel_collect(Int begin, Int end, int threads, Fn&& fn) {
    if (end <= begin) return {};
    const Int chunk = parallel_chunk_size(begin, end);
    const Int nchunks = (end - begin + chunk - 1) / chunk;
    std::vector<T> results(static_cast<size_t>(nchunks));
    if (threads <= 1 || nchunks == 1) {
        for (Int c = 0; c < nchunks; ++c) {
            Int lo = begin + c * chunk;
            results[static_cast<size_t>(c)] = fn(lo, std::min(end, lo + chunk));
        }
        return results;
    }
    std::atomic<Int> next{0};
    auto worker = [&] {
        while (true) {
            Int c = next.fetch_add(1);
            if (c >= nchunks) break;
            Int lo = begin + c * chunk;
            results[static_cast<size_t>(c)] = fn(lo, std::min(end, lo + chunk));
        }
    };
    std::vector<std::thread> pool;
    int nw = std::min<int>(threads, static_cast<int>(nchunks));
    pool.reserve(static_cast<size_t>(nw));
    for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return results;
}

int hardware_threads();

}  // namespace dioman
