#pragma once

#include <complex>
#include <functional>

namespace dpln {

// Euler-summation inversion of a Laplace transform (Abate & Whitt 1995).
// Evaluates f(t) from F(s) at a single t > 0. The discretization error is
// about 10^{-decay_digits}; euler_terms/euler_avg control the binomially
// averaged partial sums.
struct EulerInversion {
    double decay_digits = 8.0;  // A = decay_digits * ln 10
    int terms = 25;             // plain terms before averaging starts
    int avg = 12;               // binomial averaging window

    double invert(const std::function<std::complex<double>(std::complex<double>)>& transform,
                  double t) const;
};

}  // namespace dpln
