#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace cephgrow {

// Deterministic pseudo-random stream (xoshiro256** seeded through
// splitmix64). Not std::mt19937 on purpose: the distributions below are
// specified bit-for-bit, so cohorts and trained models reproduce exactly
// across standard-library versions and thread counts.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& s : state_) s = splitmix64(x);
    }

    // Independent child stream; children of distinct ids never collide in
    // practice (splitmix64 is a bijection over the mixed key).
    Rng child(std::uint64_t stream_id) const {
        std::uint64_t x = state_[0] ^ (0x9e3779b97f4a7c15ull * (stream_id + 1));
        return Rng(splitmix64(x) ^ state_[3]);
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

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Unbiased integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    // Standard normal, Box-Muller; the spare deviate is cached so a stream
    // consumes uniforms in a fixed pattern.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double std_dev) { return mean + std_dev * normal(); }

    // Rejection-sampled truncated normal; window is assumed to have
    // non-trivial mass (true for every stage age model in this project).
    double truncated_normal(double mean, double std_dev, double lo, double hi) {
        if (std_dev <= 0.0) return mean < lo ? lo : (mean > hi ? hi : mean);
        for (;;) {
            const double v = normal(mean, std_dev);
            if (v >= lo && v <= hi) return v;
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Stable 64-bit mix of several keys, used to derive per-cell seeds.
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t x = a ^ (0x9e3779b97f4a7c15ull + (b << 6) + (b >> 2));
        return splitmix64(x);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace cephgrow
