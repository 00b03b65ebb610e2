#pragma once

#include <array>
#include <cstdint>

// Portable, seedable random streams for the simulator.
//
// Generator: xoshiro256** (Blackman & Vigna), state filled from SplitMix64.
// Every (seed, domain, index) triple names an independent stream:
//
//   key   = mix(seed ^ mix(domain)) + 0x9E3779B97F4A7C15 * (index + 1)
//   state = four successive SplitMix64 outputs starting from key
//
// where mix is the SplitMix64 finalizer. Uniform doubles take the top 53 bits;
// normals use the Marsaglia polar method. None of this goes through <random>
// distributions, whose output is implementation-defined.
namespace pvaudit::rng {

std::uint64_t splitmix64_mix(std::uint64_t x) noexcept;

class Xoshiro256StarStar {
public:
    explicit Xoshiro256StarStar(std::uint64_t seed) noexcept;

    std::uint64_t next() noexcept;

private:
    std::array<std::uint64_t, 4> s_{};
};

class Stream {
public:
    enum class Domain : std::uint64_t { study = 1, cluster = 2 };

    Stream(std::uint64_t seed, Domain domain, std::uint64_t index) noexcept;

    std::uint64_t next_u64() noexcept { return gen_.next(); }
    // Uniform on [0, 1).
    double uniform() noexcept;
    // Uniform integer on [lo, hi], unbiased (rejection).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;
    double standard_normal() noexcept;

private:
    Xoshiro256StarStar gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace pvaudit::rng
