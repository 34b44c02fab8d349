#pragma once

#include <cstdint>

namespace unclesim {

// splitmix64 finalizer; used for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// xoshiro256** seeded from a single 64-bit value. Small, fast, and fully
// reproducible across platforms, which the simulation protocol requires
// (identical seed -> identical walk, bit for bit).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm = splitmix64(sm);
            word = sm;
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform integer in [0, n). Multiply-shift; bias is ~n/2^64.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

// Per-walk stream derivation: every (master seed, doubling round, walk index)
// triple owns an independent stream, so batches are reproducible no matter
// how walks are scheduled across threads.
inline std::uint64_t walk_stream_seed(std::uint64_t master_seed,
                                      std::uint32_t round,
                                      std::uint32_t walk_index) {
    std::uint64_t x = splitmix64(master_seed + 0x9E3779B97F4A7C15ull * (std::uint64_t{round} + 1));
    return splitmix64(x + 0xBF58476D1CE4E5B9ull * (std::uint64_t{walk_index} + 1));
}

}  // namespace unclesim
