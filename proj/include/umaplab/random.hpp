#ifndef UMAPLAB_RANDOM_HPP
#define UMAPLAB_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace umaplab {

/**
 * @brief Seeded random source with fully specified variate algorithms.
 *
 * The engine is `std::mt19937_64`, whose output sequence is fixed by the standard.
 * The distributions are implemented here rather than taken from `<random>`,
 * whose algorithms are left to the standard library vendor:
 *
 * - `uniform()` takes the top 53 bits of one engine draw, giving a value in [0, 1).
 * - `normal()` uses the Box-Muller transform, returning the cosine branch first
 *   and caching the sine branch for the next call.
 * - `index(n)` uses rejection sampling on the full 64-bit range, so it is unbiased.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double sd) {
        return mean + sd * normal();
    }

    /// Uniform integer in [0, n). Requires n > 0.
    std::uint64_t index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n + 1) % n;
        std::uint64_t x = engine_();
        while (x > limit) {
            x = engine_();
        }
        return x % n;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to derive independent sub-seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Sub-seed for a named stream, stable across platforms (FNV-1a over the name).
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : stream) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix_seed(master ^ mix_seed(h));
}

} // namespace umaplab

#endif
