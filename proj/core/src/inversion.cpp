#include "dpln/inversion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dpln {

double EulerInversion::invert(
    const std::function<std::complex<double>(std::complex<double>)>& transform,
    double t) const {
    if (!(t > 0.0)) throw std::domain_error("EulerInversion: t must be positive");

    const double A = decay_digits * std::numbers::ln10;
    const int total = terms + avg;

    // Alternating series f(t) ~ (e^{A/2}/t) [ F(A/2t)/2 + sum (-1)^k Re F((A+2k pi i)/2t) ].
    std::vector<double> partial(static_cast<std::size_t>(avg) + 1);
    double sum = 0.5 * transform(std::complex<double>(A / (2.0 * t), 0.0)).real();
    double sign = -1.0;
    for (int k = 1; k <= total; ++k) {
        const std::complex<double> s(A / (2.0 * t), k * std::numbers::pi / t);
        sum += sign * transform(s).real();
        sign = -sign;
        if (k >= terms) partial[static_cast<std::size_t>(k - terms)] = sum;
    }

    // Binomial (Euler) average of the last avg+1 partial sums.
    double acc = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= avg; ++j) {
        acc += binom * partial[static_cast<std::size_t>(j)];
        binom *= static_cast<double>(avg - j) / static_cast<double>(j + 1);
    }
    acc *= std::pow(2.0, -avg);

    return std::exp(0.5 * A) / t * acc;
}

}  // namespace dpln
