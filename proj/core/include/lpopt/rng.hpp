// core/include/lpopt/rng.hpp
//
// Self-contained deterministic random number generator (xoshiro256** with
// splitmix64 seeding). The standard <random> distributions are not guaranteed
// to produce the same sequences across standard libraries, so all sampling
// used by the optimizers goes through this class. Every parallel chain/worker
// owns an independent stream derived from the master seed.

#pragma once

#include <cmath>
#include <cstdint>

namespace lpopt {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    // Independent stream for a chain/worker. Streams derived from the same
    // master seed with distinct ids do not overlap in practice.
    static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id) {
        std::uint64_t sm = master_seed;
        std::uint64_t a = splitmix64(sm);
        std::uint64_t b = stream_id + 0x632be59bd9b4e019ULL;
        return Rng(a ^ splitmix64(b));
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

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi], inclusive. Unbiased (rejection sampling).
    int uniform_int(int lo, int hi) {
        if (hi <= lo) return lo;
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = ~0ULL - (~0ULL % span);
        std::uint64_t draw;
        do {
            draw = next_u64();
        } while (draw >= limit);
        return lo + static_cast<int>(draw % span);
    }

    // Standard normal via Box-Muller (cosine branch only; no cached state, so
    // copies of the generator stay in lockstep).
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

}  // namespace lpopt
