#ifndef CRWB_RNG_HPP
#define CRWB_RNG_HPP

#include <cstdint>
#include <random>

#include "crwb/errors.hpp"

namespace crwb {

/// Deterministic random source: mt19937_64 (bit-exact across platforms by the
/// standard) with rejection-sampled integer draws, so a seed pins the whole
/// stream regardless of compiler or libc.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    /// Unbiased uniform draw from [lo, hi], both ends inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) throw OutOfRange("uniform_int: empty range");
        const std::uint64_t span =
            static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit range
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

    /// Independent child stream for (seed, index); used by parallel sweeps so
    /// results do not depend on scheduling order.
    static SeededRng derive(std::uint64_t seed, std::uint64_t stream) {
        return SeededRng(mix(mix(seed) ^ mix(stream + 0x9e3779b97f4a7c15ull)));
    }

  private:
    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace crwb

#endif
