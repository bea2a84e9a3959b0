#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace seedbank {

// Runs fn(replicate) for every replicate and returns the results indexed by
// replicate. Work is strided over threads but each result lands in its own
// slot and any further reduction happens in replicate order, so outputs are
// identical for every thread count.
template <typename R, typename Fn>
std::vector<R> map_replicates(std::uint64_t replicates, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = 1;
    std::vector<R> results(replicates);
    if (threads == 1 || replicates < 2) {
        for (std::uint64_t rep = 0; rep < replicates; ++rep) results[rep] = fn(rep);
        return results;
    }
    auto worker = [&](unsigned w) {
        for (std::uint64_t rep = w; rep < replicates; rep += threads) results[rep] = fn(rep);
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker, w);
    worker(0);
    for (auto& t : pool) t.join();
    return results;
}

} // namespace seedbank
