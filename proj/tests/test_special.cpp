#include <doctest.h>

#include <cmath>

#include "dpln/special.hpp"

using namespace dpln;

// Reference values computed with 25-digit arbitrary-precision arithmetic.

TEST_CASE("Mill's ratio against high-precision references") {
    struct Row {
        double z, expected;
    };
    const Row rows[] = {
        {-20.0, 1.811283015892591616e+87},
        {-5.0, 672621.6367228792523},
        {0.0, 1.253314137315500251},
        {1.0, 0.6556795424187984715},
        {7.0, 0.1401041834530502416},   // continued-fraction branch boundary
        {10.0, 0.0990285964717319214},
        {40.0, 0.02498440420572057115},
    };
    for (const auto& row : rows) {
        CHECK(mills_ratio(row.z) == doctest::Approx(row.expected).epsilon(1e-14));
        CHECK(log_mills_ratio(row.z) ==
              doctest::Approx(std::log(row.expected)).epsilon(1e-14));
    }
}

TEST_CASE("Mill's ratio identities") {
    // R satisfies R'(z) = z R(z) - 1, hence R(z) ~ 1/z for large z.
    CHECK(mills_ratio(1e8) == doctest::Approx(1e-8).epsilon(1e-8));
    // Consistency between normal tail and ratio form at moderate z.
    for (double z : {-3.0, -1.0, 0.5, 3.0, 6.0}) {
        CHECK(mills_ratio(z) == doctest::Approx(norm_sf(z) / norm_pdf(z)).epsilon(1e-13));
    }
    // log version stays finite deep in the left tail where R overflows.
    CHECK(std::isfinite(log_mills_ratio(-40.0)));
    CHECK(log_mills_ratio(-40.0) == doctest::Approx(800.0 + kLogSqrt2Pi).epsilon(1e-12));
}

TEST_CASE("normal quantile against references and round trips") {
    CHECK(norm_ppf(0.5) == 0.0);
    CHECK(norm_ppf(0.025) == doctest::Approx(-1.959963984540054236).epsilon(1e-14));
    CHECK(norm_ppf(0.975) == doctest::Approx(1.959963984540054236).epsilon(1e-14));
    CHECK(norm_ppf(0.31) == doctest::Approx(-0.4958503473474533266).epsilon(1e-14));
    CHECK(norm_ppf(1e-12) == doctest::Approx(-7.03448382530113193).epsilon(1e-13));
    // Round trips through the cdf across 600 orders of magnitude.
    for (double lp = -300.0; lp < -0.5; lp += 7.3) {
        const double p = std::pow(10.0, lp);
        CHECK(norm_cdf(norm_ppf(p)) == doctest::Approx(p).epsilon(1e-9));
        CHECK(norm_sf(norm_ppf(1.0 - p)) == doctest::Approx(p).epsilon(1e-9));
    }
    CHECK(norm_ppf(0.0) == -INFINITY);
    CHECK(norm_ppf(1.0) == INFINITY);
    CHECK_THROWS_AS(norm_ppf(-0.1), std::domain_error);
    CHECK_THROWS_AS(norm_ppf(1.5), std::domain_error);
}

TEST_CASE("log_sum_exp") {
    CHECK(log_sum_exp(0.0, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(log_sum_exp(-1000.0, -1001.0) ==
          doctest::Approx(-1000.0 + std::log1p(std::exp(-1.0))).epsilon(1e-15));
    CHECK(log_sum_exp(-INFINITY, 3.0) == 3.0);
    CHECK(log_sum_exp(5.0, -INFINITY) == 5.0);
}

TEST_CASE("regularized incomplete gamma against references") {
    CHECK(gamma_p(0.5, 0.25) == doctest::Approx(0.5204998778130465377).epsilon(1e-13));
    CHECK(gamma_p(3.0, 2.0) == doctest::Approx(0.3233235838169365405).epsilon(1e-13));
    CHECK(gamma_p(10.0, 12.0) == doctest::Approx(0.7576078383294876513).epsilon(1e-13));
    CHECK(gamma_p(2.5, 0.1) == doctest::Approx(0.0008861387888124426067).epsilon(1e-13));
    for (double a : {0.5, 3.0, 10.0})
        for (double x : {0.1, 2.0, 12.0})
            CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-14));
}
