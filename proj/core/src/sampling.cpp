#include "dpln/sampling.hpp"

#include <cmath>

#include "dpln/special.hpp"

namespace dpln {

namespace {

// Standard normal conditioned on z >= a.
double std_normal_tail(double a, RngStream& rng) {
    if (a <= 4.0) {
        // x = -Phi^{-1}(u * Phi^c(a)) maps u ~ U(0,1) onto the tail exactly
        // and keeps precision when Phi(a) is close to 1.
        const double q = norm_sf(a);
        return -norm_ppf(rng.uniform() * q);
    }
    // Robert (1995) exponential-rejection sampler.
    const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (;;) {
        const double z = a + rng.exponential(lambda);
        const double d = z - lambda;
        if (std::log(rng.uniform()) <= -0.5 * d * d) return z;
    }
}

}  // namespace

double truncated_normal_lower(double mean, double sd, double lower, RngStream& rng) {
    if (!(sd > 0.0)) throw std::domain_error("truncated_normal: sd must be positive");
    const double a = (lower - mean) / sd;
    return mean + sd * std_normal_tail(a, rng);
}

double truncated_normal_upper(double mean, double sd, double upper, RngStream& rng) {
    return -truncated_normal_lower(-mean, sd, -upper, rng);
}

double truncated_exponential(double rate, double lower, RngStream& rng) {
    if (!(rate > 0.0)) throw std::domain_error("truncated_exponential: rate must be positive");
    const double base = std::max(lower, 0.0);
    return base + rng.exponential(rate);
}

}  // namespace dpln
