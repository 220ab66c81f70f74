#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpln {

// Thrown when a requested moment E(X^r) does not exist (r >= alpha).
class moment_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when an iterative solver fails to reach tolerance; carries the
// last bracketing interval.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double lo, double hi)
        : std::runtime_error(what), bracket_lo(lo), bracket_hi(hi) {}
    double bracket_lo;
    double bracket_hi;
};

// Parameters (alpha, beta, nu, tau2) shared by the Normal Laplace law of
// Y = log X and the double Pareto lognormal law of X. alpha is the right
// tail index, beta the left, nu/tau2 locate and scale the Gaussian core.
struct DplnParams {
    double alpha;
    double beta;
    double nu;
    double tau2;

    void validate() const {
        if (!(alpha > 0.0) || !(beta > 0.0) || !(tau2 > 0.0) || !std::isfinite(nu) ||
            !std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(tau2))
            throw std::domain_error("DplnParams: require alpha, beta, tau2 > 0 and nu finite");
    }

    double tau() const { return std::sqrt(tau2); }
};

enum class ScaleTag { raw, log };

// Observations either on the positive raw scale (dPlN) or the log scale (NL).
struct SampleBatch {
    std::vector<double> values;
    ScaleTag scale_tag = ScaleTag::raw;

    void validate() const {
        for (double v : values) {
            if (!std::isfinite(v)) throw std::domain_error("SampleBatch: non-finite value");
            if (scale_tag == ScaleTag::raw && !(v > 0.0))
                throw std::domain_error("SampleBatch: raw-scale values must be positive");
        }
    }

    SampleBatch to_log() const {
        if (scale_tag == ScaleTag::log) return *this;
        SampleBatch out;
        out.scale_tag = ScaleTag::log;
        out.values.reserve(values.size());
        for (double v : values) out.values.push_back(std::log(v));
        return out;
    }
};

// FNV-1a over the raw bytes of the values; identifies the data a Chain
// was fitted to.
inline std::uint64_t data_digest(const std::vector<double>& values) {
    std::uint64_t h = 1469598103934665603ULL;
    for (double v : values) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xffULL;
            h *= 1099511628211ULL;
        }
    }
    return h;
}

}  // namespace dpln
