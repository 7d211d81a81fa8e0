#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace alie {

/// SplitMix64 finalizer; also used as the key-mixing step for sub-streams.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/**
 * @brief Counter-seeded xoshiro256++ stream with hierarchical sub-streams.
 *
 * Streams derived from distinct key paths (e.g. base seed -> cell -> replication)
 * are statistically independent and reproducible regardless of thread count or
 * evaluation order. Normal variates use Box-Muller, so a fixed stream yields a
 * fixed draw sequence on every platform with IEEE doubles.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) { reseed(seed); }

    /// Derive an independent sub-stream from a base seed and a key path.
    static Rng derive(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
        std::uint64_t key = mix64(base);
        for (std::uint64_t v : path) {
            key = mix64(key ^ (0x632be59bd9b4e019ULL + v));
        }
        return Rng(key);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal draw.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double sd) { return sd * normal(); }

  private:
    void reseed(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& s : s_) {
            x = mix64(x);
            s = x;
        }
        has_spare_ = false;
        spare_ = 0.0;
    }

    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace alie
