#include <doctest.h>

#include <cmath>

#include "dpln/simulate.hpp"

using namespace dpln;

TEST_CASE("law plumbing") {
    RngStream rng(1);
    CHECK(draw_law(DeterministicLaw{2.5}, rng) == 2.5);
    CHECK(law_mean(ExponentialLaw{2.0}) == doctest::Approx(0.5));
    CHECK(law_mean(DeterministicLaw{3.0}) == 3.0);
    CHECK(std::isinf(law_mean(SimLaw{DplnParams{0.8, 2.0, 0.0, 0.25}})));
    const DplnParams p{3.0, 2.0, 0.0, 0.25};
    CHECK(law_mean(SimLaw{p}) == doctest::Approx(std::exp(0.125)).epsilon(1e-12));
    for (int i = 0; i < 100; ++i) CHECK(draw_law(SimLaw{p}, rng) > 0.0);
}

TEST_CASE("same seed reproduces the run exactly") {
    SimConfig cfg;
    cfg.n_customers = 20000;
    cfg.warmup = 2000;
    cfg.seed = 77;
    const SimResult a = simulate(cfg);
    const SimResult b = simulate(cfg);
    REQUIRE(a.waiting_times.size() == b.waiting_times.size());
    for (std::size_t i = 0; i < a.waiting_times.size(); ++i)
        CHECK(a.waiting_times[i] == b.waiting_times[i]);
    CHECK(a.utilization == b.utilization);
    cfg.seed = 78;
    const SimResult c = simulate(cfg);
    CHECK(c.mean_wq != a.mean_wq);
}

TEST_CASE("M/M/1 reference: mean waiting time and utilization") {
    SimConfig cfg;  // defaults: exp(1) arrivals, exp(2) service
    cfg.n_customers = 200000;
    cfg.warmup = 20000;
    cfg.seed = 5;
    const SimResult res = simulate(cfg);
    // Exact M/M/1: W_q mean = rho/(mu - lambda) = 0.5, utilization 0.5.
    CHECK(std::abs(res.mean_wq - 0.5) < 4.0 * res.mean_wq_se);
    CHECK(res.mean_wq_se > 0.0);
    CHECK(res.mean_wq_se < 0.05);
    CHECK(res.utilization == doctest::Approx(0.5).epsilon(0.03));
    // Pre-arrival system size is geometric(1/2): P(0) = 0.5.
    const double n_obs = static_cast<double>(res.waiting_times.size());
    CHECK(static_cast<double>(res.pre_arrival_counts[0]) / n_obs ==
          doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("waiting times increase pathwise with the service load") {
    SimConfig light;
    light.n_customers = 5000;
    light.warmup = 500;
    light.seed = 9;
    light.service_law = DeterministicLaw{0.5};
    SimConfig heavy = light;
    heavy.service_law = DeterministicLaw{0.8};
    const SimResult a = simulate(light);
    const SimResult b = simulate(heavy);
    // Same arrival stream (same seed, deterministic service draws do not
    // consume randomness): Lindley is monotone in the service times.
    REQUIRE(a.waiting_times.size() == b.waiting_times.size());
    for (std::size_t i = 0; i < a.waiting_times.size(); ++i)
        CHECK(b.waiting_times[i] >= a.waiting_times[i]);
    CHECK(b.mean_wq > a.mean_wq);
}

TEST_CASE("warmup only trims the front of the record") {
    SimConfig cfg;
    cfg.n_customers = 3000;
    cfg.warmup = 100;
    cfg.seed = 4;
    SimConfig longer = cfg;
    longer.warmup = 600;
    const SimResult a = simulate(cfg);
    const SimResult b = simulate(longer);
    REQUIRE(a.waiting_times.size() == 2900);
    REQUIRE(b.waiting_times.size() == 2400);
    for (std::size_t i = 0; i < b.waiting_times.size(); ++i)
        CHECK(b.waiting_times[i] == a.waiting_times[i + 500]);
}

TEST_CASE("config validation") {
    SimConfig cfg;
    cfg.n_customers = 100;
    cfg.warmup = 100;
    CHECK_THROWS_AS(simulate(cfg), std::domain_error);
}

TEST_CASE("ruin path frequencies behave like a ruin probability") {
    RngStream rng(17);
    const std::vector<double> u{0.0, 1.0, 5.0, 50.0};
    // Claims exp(1), rate 0.5: rho = 0.5; psi(u) = 0.5 exp(-u/2) exactly.
    const auto freq = simulate_ruin(0.5, ExponentialLaw{1.0}, u, 20000, 2000.0, rng);
    REQUIRE(freq.size() == u.size());
    for (std::size_t i = 1; i < freq.size(); ++i) CHECK(freq[i] <= freq[i - 1]);
    CHECK(freq[0] == doctest::Approx(0.5).epsilon(0.05));
    CHECK(freq[1] == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(0.08));
    CHECK(freq[3] < 1e-3);
    CHECK_THROWS_AS(simulate_ruin(-1.0, ExponentialLaw{1.0}, u, 10, 10.0, rng),
                    std::domain_error);
}
