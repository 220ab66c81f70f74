#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "dpln/gibbs.hpp"
#include "dpln/params.hpp"
#include "dpln/tam.hpp"

namespace dpln {

// Thrown when a steady-state quantity is requested for an unstable system.
class instability_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- G/M/1 with dPlN interarrivals ----

// Traffic intensity rho = (alpha-1)(beta+1) / (mu alpha beta e^{nu+tau2/2}).
// nullopt means the mean interarrival time is infinite (alpha <= 1) and the
// system is stable whatever mu.
std::optional<double> gm1_rho(const DplnParams& p, double mu);

// Unique root in (0,1) of r = f*_N(mu(1-r)); bisection on a bracketed sign
// change, so the trivial root r = 1 can never be returned. Throws
// instability_error when no interior sign change exists.
double solve_r0(const TamApprox& tam, double mu);

// Steady-state G/M/1 laws: geometric pre-arrival queue size and exponential
// waiting times, all driven by r0.
struct Gm1Solution {
    double rho = 0.0;  // 0 when the interarrival mean is infinite
    double r0 = 0.0;
    double mu = 0.0;

    double queue_pmf(unsigned n) const { return (1.0 - r0) * std::pow(r0, n); }
    double wq_cdf(double x) const { return x < 0.0 ? 0.0 : 1.0 - r0 * std::exp(-mu * (1.0 - r0) * x); }
    double w_cdf(double x) const { return x < 0.0 ? 0.0 : 1.0 - std::exp(-mu * (1.0 - r0) * x); }
};

// ---- M/G/1 with dPlN service ----

// rho = lambda alpha beta e^{nu+tau2/2} / ((alpha-1)(beta+1));
// nullopt means the mean service time is infinite (alpha <= 1) and the
// system is never stable.
std::optional<double> mg1_rho(const DplnParams& p, double lambda);

// Pollaczek-Khinchine transform W*_q(s) = (1-rho)s / (s - lambda(1 - B*(s)))
// with B* the TAM service transform.
double wq_transform(double s, double lambda, double rho, const TamApprox& tam);

// Waiting-time cdf obtained by Euler-summation inversion of W*_q(s)/s,
// clamped to [0,1] and monotonized.
struct InvertedCdf {
    std::vector<double> t;
    std::vector<double> value;
    double max_adjustment = 0.0;   // largest clamping/monotonizing correction
    bool accuracy_warning = false;
};

InvertedCdf invert_wq(double lambda, double rho, const TamApprox& tam,
                      const std::vector<double>& time_grid);

// ---- Posterior (Rao-Blackwellized) reports ----

struct QueueOptions {
    std::size_t tam_n = 1000;
    TamGrid grid = TamGrid::standard();
    std::size_t stride = 1;  // use every stride-th draw
    std::size_t queue_n_max = 20;
    std::vector<double> time_grid;  // empty: log-spaced 200 points to the 0.999 quantile
};

struct Gm1PosteriorReport {
    double p_stable = 0.0;        // P(rho < 1 | data)
    double mean_rho = 0.0;        // E(rho | data), rho = 0 for always-stable draws
    std::size_t n_draws_used = 0;
    std::size_t n_stable = 0;
    std::size_t n_always_stable = 0;  // alpha <= 1 draws (subset of stable)
    std::size_t stride = 1;
    std::vector<double> rho_draws;
    std::vector<double> r0_draws;     // NaN for unstable draws
    std::vector<double> queue_pmf;    // n = 0..queue_n_max, averaged over stable draws
    std::vector<double> time_grid;
    std::vector<double> wq_cdf;
    std::vector<double> w_cdf;
};

// Fixed service rate, or per-draw rates paired by index (posterior service
// rate draws from fit_exponential_rate). Zero stable draws yields a report
// with p_stable = 0 and empty distribution tables, not an exception.
Gm1PosteriorReport gm1_posterior(const Chain& chain, double mu, const QueueOptions& opts = {});
Gm1PosteriorReport gm1_posterior(const Chain& chain, const std::vector<double>& mu_draws,
                                 const QueueOptions& opts = {});

struct Mg1PosteriorReport {
    double p_stable = 0.0;
    double mean_rho_stable = 0.0;  // average over stable draws
    std::size_t n_draws_used = 0;
    std::size_t n_stable = 0;
    std::size_t stride = 1;
    std::vector<double> rho_draws;  // +inf when the service mean does not exist
    std::vector<double> time_grid;
    std::vector<double> wq_cdf;     // averaged over stable draws
};

Mg1PosteriorReport mg1_posterior(const Chain& chain, double lambda, const QueueOptions& opts = {});

// ---- Ruin probabilities via the M/G/1 duality ----

// Risk process u + t - sum C_i with unit premium rate; psi(u) = P(W_q > u)
// in the dual M/dPlN/1 queue with claim rate lambda.
struct RuinQuery {
    double u = 0.0;
    double lambda = 1.0;
};

struct RuinSurface {
    std::vector<double> u_grid;
    std::vector<double> mean_psi;               // E(psi(u) | data)
    std::vector<std::vector<double>> per_draw;  // [draw][u]
    std::size_t n_draws_used = 0;
    std::size_t n_certain = 0;  // draws with rho >= 1 or infinite claim mean
};

// Draws with alpha <= 1 or rho >= 1 contribute psi = 1 (eventual ruin is
// certain); stable draws use 1 - W_q(u) from the inverted P-K transform.
RuinSurface ruin_surface(const std::vector<double>& u_grid, double lambda, const Chain& chain,
                         const QueueOptions& opts = {});

struct RuinResult {
    double mean_psi = 0.0;
    std::vector<double> per_draw;
};

RuinResult ruin_probability(const RuinQuery& query, const Chain& chain,
                            const QueueOptions& opts = {});

}  // namespace dpln
