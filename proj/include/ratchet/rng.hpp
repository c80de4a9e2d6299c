#pragma once

#include <cmath>
#include <cstdint>

namespace ratchet {

// Name recorded in every run manifest so outputs can be reproduced by
// independent implementations.
inline constexpr const char* kRngAlgorithm = "xoshiro256++ (splitmix64-seeded)";

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic per-job stream seed for worker pools: independent of worker
// count and schedule, depends only on (master_seed, job_index).
inline std::uint64_t job_seed(std::uint64_t master_seed, std::uint64_t job_index) {
    std::uint64_t state = master_seed ^ (0x6a09e667f3bcc909ull * (job_index + 1));
    return splitmix64(state);
}

// 64-bit xoshiro256++ generator with self-contained variate samplers.
// All distributions are implemented here (not via <random>) because the
// standard library distributions are implementation-defined and would break
// the bit-exact reproducibility contract of the artifact files.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1); safe as a log() argument.
    double uniform_pos() {
        double u;
        do {
            u = uniform01();
        } while (u <= 0.0);
        return u;
    }

    // Standard normal via the Marsaglia polar method (pairs cached).
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cached_ = v * f;
        have_cached_ = true;
        return u * f;
    }

    // Exact Binomial(n, p) sample. Inversion for n*min(p,1-p) < 30, the
    // BTPE acceptance-rejection algorithm of Kachitvichyanukul & Schmeiser
    // (1988) otherwise. Never normal-approximate.
    long long binomial(long long n, double p);

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    long long binomial_inversion(long long n, double r);
    long long binomial_btpe(long long n, double r);

    std::uint64_t state_[4];
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace ratchet
