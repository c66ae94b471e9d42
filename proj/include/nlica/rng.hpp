// Seeded RNG with hand-rolled samplers so streams are bit-stable across
// library versions. Distinct logical streams are derived by hashing
// (seed, stream id), which keeps per-component draws independent.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nlica {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stable stream derivation: hash the pair (seed, stream).
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 0x1234567));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : eng_(splitmix64(seed)) {}

    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        return Rng(derive_stream(seed, stream_id));
    }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Log-uniform over [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // Standard normal via Marsaglia polar, one cached spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Laplace with scale b (variance 2 b^2), via inverse CDF.
    double laplace(double b = 1.0) {
        const double u = uniform01() - 0.5;
        return -b * (u < 0 ? -1.0 : 1.0) * std::log1p(-2.0 * std::fabs(u));
    }

    // Integer in [0, n).
    int below(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

    // In-place Fisher-Yates shuffle.
    template <class V>
    void shuffle(V& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            const int j = below(i + 1);
            std::swap(v[i], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace nlica
