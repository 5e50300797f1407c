#pragma once

#include <cstdint>
#include <memory>
#include <random>

namespace hetseg {

/// SplitMix64 finalizer (Steele, Lea & Flood). Bijective on 64-bit words.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of replication `index` under master seed `seed`:
///   stream_seed(seed, index) = mix64(seed XOR mix64(index)).
/// Every simulator derives its per-replication generator from this rule, so
/// a replication's draws depend only on (seed, index), never on scheduling.
[[nodiscard]] constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(seed ^ mix64(index));
}

/// Reproducible generator: std::mt19937_64 (bit-exact by the standard) feeding
/// Boost's ziggurat normal sampler, which unlike std::normal_distribution has a
/// single implementation across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    Rng(const Rng&) = delete;
    Rng& operator=(const Rng&) = delete;
    Rng(Rng&&) noexcept;
    Rng& operator=(Rng&&) noexcept;
    ~Rng();

    double normal();
    double uniform();
    std::uint64_t next_u64();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace hetseg
