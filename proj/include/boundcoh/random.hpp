#pragma once

// Seeded random streams and a deterministic parallel loop.
//
// Every sample index gets its own generator derived from (master seed,
// index) by a counter-based split, so results do not depend on how work
// is distributed across threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

namespace boundcoh {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent generator for task `index` under master seed `seed`.
inline Rng substream(std::uint64_t seed, std::uint64_t index)
{
    const std::uint64_t a = splitmix64(seed ^ 0x5bd1e9955bd1e995ULL);
    const std::uint64_t b = splitmix64(a + splitmix64(index + 1));
    std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32)};
    return Rng(seq);
}

inline double standard_normal(Rng& rng)
{
    // Box-Muller; std::normal_distribution keeps hidden state between calls.
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double u1 = u(rng);
    while (u1 <= 0.0) u1 = u(rng);
    const double u2 = u(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Runs body(i) for i in [0, count). Bodies must only write to slot i of
/// any shared output. Exceptions are rethrown on the calling thread (the
/// one from the lowest failing chunk).
template <typename Body>
void parallel_for(std::size_t count, Body&& body, unsigned max_threads = 0)
{
    unsigned threads = max_threads ? max_threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(count, 64))));
    if (threads <= 1 || count < 256) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(count, begin + chunk);
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace boundcoh
