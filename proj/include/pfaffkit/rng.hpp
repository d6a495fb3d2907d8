#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace pfk {

// Deterministic random source. mt19937_64's raw output sequence is pinned by
// the standard and the range reduction below is our own, so a given seed
// yields the same stream on every platform and compiler. Never use
// std::uniform_int_distribution for anything that must reproduce.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // uniform integer in [lo, hi], both ends included
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw std::invalid_argument("Rng::uniform: empty range");
        std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next());  // full 64-bit range
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + v % span);
    }

    // Derive the seed of an independent stream for a named sub-task, so the
    // order in which sub-tasks run cannot perturb each other's draws.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace pfk
