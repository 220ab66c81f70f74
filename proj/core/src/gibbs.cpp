#include "dpln/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpln/density.hpp"
#include "dpln/sampling.hpp"
#include "dpln/special.hpp"

namespace dpln {

double z_mixture_upper_weight(double y, const DplnParams& p) {
    const double tau = p.tau();
    const double s = (y - p.nu) / tau;
    const double log_r_alpha = log_mills_ratio(p.alpha * tau - s);
    const double log_r_beta = log_mills_ratio(p.beta * tau + s);
    return std::exp(log_r_beta - log_sum_exp(log_r_alpha, log_r_beta));
}

double sample_z_given_y(double y, const DplnParams& p, RngStream& rng) {
    p.validate();
    const double tau = p.tau();
    if (rng.uniform() < z_mixture_upper_weight(y, p))
        return truncated_normal_lower(p.nu - p.tau2 * p.beta, tau, y, rng);
    return truncated_normal_upper(p.nu + p.tau2 * p.alpha, tau, y, rng);
}

double sample_e1_given_w(double w, double alpha, double beta, RngStream& rng) {
    if (!(alpha + beta > 0.0)) throw std::domain_error("sample_e1_given_w: alpha+beta must be > 0");
    return truncated_exponential(alpha + beta, w, rng);
}

std::pair<double, double> update_nu_tau(const std::vector<double>& z, const PriorSpec& prior,
                                        RngStream& rng) {
    prior.validate();
    const auto n = static_cast<double>(z.size());
    if (z.empty()) throw std::invalid_argument("update_nu_tau: empty z");

    const double zbar = std::accumulate(z.begin(), z.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : z) ss += (v - zbar) * (v - zbar);  // (n-1) s_z^2

    const double shape = 0.5 * (prior.a + n);
    const double d = prior.m - zbar;
    const double rate = 0.5 * (prior.b + ss + (prior.k * n / (prior.k + n)) * d * d);
    const double tau2 = rng.inverse_gamma(shape, rate);

    const double mean = (prior.k * prior.m + n * zbar) / (prior.k + n);
    const double nu = rng.normal(mean, std::sqrt(tau2 / (prior.k + n)));
    return {nu, tau2};
}

std::pair<double, double> update_alpha_beta(const std::vector<double>& e1,
                                            const std::vector<double>& e2,
                                            const PriorSpec& prior, RngStream& rng) {
    prior.validate();
    if (e1.empty() || e2.empty()) throw std::invalid_argument("update_alpha_beta: empty input");
    const double sum1 = std::accumulate(e1.begin(), e1.end(), 0.0);
    const double sum2 = std::accumulate(e2.begin(), e2.end(), 0.0);
    const auto n1 = static_cast<double>(e1.size());
    const auto n2 = static_cast<double>(e2.size());
    const double alpha = rng.gamma(prior.c_alpha + n1, prior.d_alpha + sum1);
    const double beta = rng.gamma(prior.c_beta + n2, prior.d_beta + sum2);
    return {alpha, beta};
}

Chain run_gibbs(const SampleBatch& data, const PriorSpec& prior, const GibbsConfig& cfg) {
    prior.validate();
    cfg.validate();
    data.validate();
    if (data.values.empty()) throw std::invalid_argument("run_gibbs: empty data");

    const SampleBatch logged = data.to_log();
    const std::vector<double>& y = logged.values;
    const std::size_t n = y.size();

    DplnParams theta;
    if (cfg.init) {
        theta = *cfg.init;
        theta.validate();
    } else {
        // Small starting alpha/beta; nu and tau2 from the log-data moments.
        const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
        double var = 0.0;
        for (double v : y) var += (v - mean) * (v - mean);
        var = (n > 1) ? var / static_cast<double>(n - 1) : 1.0;
        theta = {0.5, 0.5, mean, std::max(var, 1e-6)};
    }

    RngStream rng(cfg.seed);
    std::vector<double> z(n), e1(n), e2(n);

    Chain chain;
    chain.config = cfg;
    chain.prior = prior;
    chain.digest = data_digest(data.values);
    chain.draws.reserve((cfg.iterations - cfg.burn_in) / cfg.thin);

    for (std::size_t t = 1; t <= cfg.iterations; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = sample_z_given_y(y[i], theta, rng);
            const double w = y[i] - z[i];
            e1[i] = sample_e1_given_w(w, theta.alpha, theta.beta, rng);
            e2[i] = e1[i] - w;
        }
        const auto [nu, tau2] = update_nu_tau(z, prior, rng);
        theta.nu = nu;
        theta.tau2 = tau2;
        const auto [alpha, beta] = update_alpha_beta(e1, e2, prior, rng);
        theta.alpha = alpha;
        theta.beta = beta;

        if (t > cfg.burn_in && (t - cfg.burn_in) % cfg.thin == 0) chain.draws.push_back(theta);
    }
    return chain;
}

namespace {

double param_field(const DplnParams& p, int j) {
    switch (j) {
        case 0: return p.alpha;
        case 1: return p.beta;
        case 2: return p.nu;
        default: return p.tau2;
    }
}

double empirical_quantile(std::vector<double>& sorted, double q) {
    const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

PosteriorSummary summarize(const Chain& chain) {
    if (chain.draws.empty()) throw std::invalid_argument("summarize: empty chain");
    const auto T = static_cast<double>(chain.draws.size());

    PosteriorSummary s{};
    std::array<std::vector<double>, 4> cols;
    for (int j = 0; j < 4; ++j) {
        cols[j].reserve(chain.draws.size());
        for (const auto& d : chain.draws) cols[j].push_back(param_field(d, j));
        s.mean[j] = std::accumulate(cols[j].begin(), cols[j].end(), 0.0) / T;
    }

    std::array<double, 4> sd{};
    for (int j = 0; j < 4; ++j) {
        double ss = 0.0;
        for (double v : cols[j]) ss += (v - s.mean[j]) * (v - s.mean[j]);
        sd[j] = std::sqrt(ss / T);
        s.zero_variance[j] = !(sd[j] > 0.0);
    }

    for (int j = 0; j < 4; ++j) {
        for (int l = 0; l < 4; ++l) {
            if (j == l || s.zero_variance[j] || s.zero_variance[l]) {
                s.correlation[j][l] = (j == l) ? 1.0 : 0.0;  // identity convention
                continue;
            }
            double cov = 0.0;
            for (std::size_t t = 0; t < cols[j].size(); ++t)
                cov += (cols[j][t] - s.mean[j]) * (cols[l][t] - s.mean[l]);
            s.correlation[j][l] = cov / (T * sd[j] * sd[l]);
        }
    }

    for (int j = 0; j < 4; ++j) {
        std::sort(cols[j].begin(), cols[j].end());
        s.ci_low[j] = empirical_quantile(cols[j], 0.025);
        s.ci_high[j] = empirical_quantile(cols[j], 0.975);
    }
    return s;
}

std::vector<double> predictive_density(const Chain& chain, const std::vector<double>& grid,
                                       ScaleTag scale_tag) {
    if (chain.draws.empty()) throw std::invalid_argument("predictive_density: empty chain");
    std::vector<double> out(grid.size(), 0.0);
    for (const auto& theta : chain.draws) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            out[i] += (scale_tag == ScaleTag::log) ? nl_pdf(grid[i], theta)
                                                   : dpln_pdf(grid[i], theta);
    }
    const auto T = static_cast<double>(chain.draws.size());
    for (double& v : out) v /= T;
    return out;
}

std::vector<double> fit_exponential_rate(const std::vector<double>& durations,
                                         double prior_shape, double prior_rate,
                                         RngStream& rng, std::size_t n_draws) {
    if (durations.empty()) throw std::invalid_argument("fit_exponential_rate: empty data");
    if (!(prior_shape > 0.0 && prior_rate > 0.0))
        throw std::domain_error("fit_exponential_rate: prior must be proper");
    double sum = 0.0;
    for (double d : durations) {
        if (!(d > 0.0)) throw std::domain_error("fit_exponential_rate: durations must be positive");
        sum += d;
    }
    const double shape = prior_shape + static_cast<double>(durations.size());
    const double rate = prior_rate + sum;
    std::vector<double> draws(n_draws);
    for (double& d : draws) d = rng.gamma(shape, rate);
    return draws;
}

}  // namespace dpln
