#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dpln/params.hpp"
#include "dpln/rng.hpp"

namespace dpln {

// Hyperparameters of the semi-conjugate prior
//   nu | tau2 ~ N(m, tau2/k),   1/tau2 ~ Gamma(a/2, b/2),
//   alpha ~ Gamma(c_alpha, d_alpha),   beta ~ Gamma(c_beta, d_beta).
// All scale/shape hyperparameters must be strictly positive: improper
// priors on alpha or beta make the posterior improper.
struct PriorSpec {
    double m = 0.0;
    double k = 4.0;
    double a = 1.0;
    double b = 1.0;
    double c_alpha = 1.0;
    double d_alpha = 1.0;
    double c_beta = 1.0;
    double d_beta = 1.0;

    void validate() const {
        if (!(k > 0.0 && a > 0.0 && b > 0.0 && c_alpha > 0.0 && d_alpha > 0.0 &&
              c_beta > 0.0 && d_beta > 0.0) ||
            !std::isfinite(m))
            throw std::domain_error("PriorSpec: all hyperparameters except m must be > 0 (proper priors required)");
    }
};

struct GibbsConfig {
    std::size_t iterations = 500000;
    std::size_t burn_in = 50000;  // 10% of the default run
    std::size_t thin = 50;
    std::uint64_t seed = 0;
    std::optional<DplnParams> init;  // default: alpha=beta=0.5, nu/tau2 from log data

    void validate() const {
        if (burn_in >= iterations) throw std::domain_error("GibbsConfig: burn_in must be < iterations");
        if (thin < 1) throw std::domain_error("GibbsConfig: thin must be >= 1");
    }
};

// Ordered posterior draws after burn-in and thinning.
struct Chain {
    std::vector<DplnParams> draws;
    GibbsConfig config;
    PriorSpec prior;
    std::uint64_t digest = 0;  // FNV-1a of the raw-scale input data
};

struct PosteriorSummary {
    std::array<double, 4> mean;      // alpha, beta, nu, tau2
    std::array<double, 4> ci_low;    // 2.5% empirical quantile
    std::array<double, 4> ci_high;   // 97.5%
    std::array<std::array<double, 4>, 4> correlation;
    std::array<bool, 4> zero_variance;  // flagged instead of NaN correlations
};

// ---- Conditional samplers (Gibbs building blocks) ----

// Z | Y = y: weighted mixture of two truncated normals. With probability
// R(y_beta)/(R(y_alpha)+R(y_beta)) draw N(nu - tau2*beta, tau2) on [y, inf),
// otherwise N(nu + tau2*alpha, tau2) on (-inf, y]. Weights are formed from
// log Mill's ratios via log-sum-exp.
double sample_z_given_y(double y, const DplnParams& p, RngStream& rng);

// Mixture weight of the upper (z >= y) branch; exposed for testing.
double z_mixture_upper_weight(double y, const DplnParams& p);

// E1 | W = w: truncated exponential on [max{w,0}, inf) with rate alpha+beta.
double sample_e1_given_w(double w, double alpha, double beta, RngStream& rng);

// (nu, tau2) | z: inverse-gamma then conditional normal draw.
std::pair<double, double> update_nu_tau(const std::vector<double>& z, const PriorSpec& prior,
                                        RngStream& rng);

// (alpha, beta) | (e1, e2): independent gamma draws
//   alpha ~ G(c_alpha + n, d_alpha + n*mean(e1)), beta likewise from e2.
std::pair<double, double> update_alpha_beta(const std::vector<double>& e1,
                                            const std::vector<double>& e2,
                                            const PriorSpec& prior, RngStream& rng);

// ---- Full sampler and posterior summaries ----

Chain run_gibbs(const SampleBatch& data, const PriorSpec& prior, const GibbsConfig& cfg);

PosteriorSummary summarize(const Chain& chain);

// Pointwise posterior predictive density: average of f_Y (log grid) or
// f_X (raw grid) over the chain draws.
std::vector<double> predictive_density(const Chain& chain, const std::vector<double>& grid,
                                       ScaleTag scale_tag);

// Conjugate posterior draws for an exponential rate given observed
// durations: Gamma(prior_shape + n, prior_rate + sum durations).
std::vector<double> fit_exponential_rate(const std::vector<double>& durations,
                                         double prior_shape, double prior_rate,
                                         RngStream& rng, std::size_t n_draws);

// ---- Chain serialization ----
// Columnar text: '#'-prefixed header (prior, config, seed, digest) followed
// by one "alpha beta nu tau2" row per draw.
void save_chain(std::ostream& os, const Chain& chain);
Chain load_chain(std::istream& is);
void save_chain_file(const std::string& path, const Chain& chain);
Chain load_chain_file(const std::string& path);

}  // namespace dpln
