#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dpln {

// Seedable random stream with explicit substream splitting. All transforms
// are implemented on top of raw 64-bit output so that draws are identical
// across platforms and standard library versions.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

    // Independent substream keyed by (seed, index).
    RngStream split(std::uint64_t index) const {
        return RngStream(mix(seed_ ^ (0x9e3779b97f4a7c15ULL * (index + 1))));
    }

    std::uint64_t seed() const { return seed_; }

    // Uniform on (0,1), never returns 0 or 1.
    double uniform() {
        const std::uint64_t bits = engine_() >> 11;  // 53 bits
        return (static_cast<double>(bits) + 0.5) * 0x1p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // Standard normal via polar Box-Muller with a one-value cache.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Marsaglia-Tsang squeeze method; shape < 1 handled by boosting.
    double gamma(double shape, double rate) {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0, rate);
            return g * std::pow(uniform(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    double inverse_gamma(double shape, double rate) { return rate / gamma(shape, 1.0); }

    std::uint64_t raw() { return engine_(); }

private:
    // splitmix64 finalizer; decorrelates sequentially chosen seeds.
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace dpln
