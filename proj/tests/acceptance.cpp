// End-to-end acceptance gate. Each numbered check prints exactly one
// PASS/FAIL line; the process exits nonzero if any required check fails.
// Check 9 depends on an external dataset and reports SKIP when absent.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "dpln/density.hpp"
#include "dpln/gibbs.hpp"
#include "dpln/queueing.hpp"
#include "dpln/sampling.hpp"
#include "dpln/simulate.hpp"
#include "dpln/special.hpp"
#include "dpln/tam.hpp"
#include "test_util.hpp"

using namespace dpln;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("criterion %d: %s — %s (%s)\n", id, ok ? "PASS" : "FAIL", what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// --- 1: normalization and mixture identity on a 48-point parameter grid ---
void check_density_grid() {
    double worst_norm = 0.0, worst_mix = 0.0;
    for (double alpha : {0.25, 0.6, 1.5, 3.0})
        for (double beta : {0.5, 1.0, 2.0})
            for (double nu : {-1.0, 1.0})
                for (double tau2 : {0.25, 1.0}) {
                    const DplnParams p{alpha, beta, nu, tau2};
                    const double lo = nu - 10.0 * p.tau() - 40.0 / beta;
                    const double hi = nu + 10.0 * p.tau() + 40.0 / alpha;
                    const double total = testutil::integrate(
                        [&](double y) { return nl_pdf(y, p); }, lo, hi, 1e-10);
                    worst_norm = std::max(worst_norm, std::abs(total - 1.0));
                    const double w1 = beta / (alpha + beta), w2 = alpha / (alpha + beta);
                    for (double dy : {-1.0, 0.0, 2.0}) {
                        const double x = std::exp(nu + dy);
                        const double mix =
                            w1 * dpln_mixture_f1(x, p) + w2 * dpln_mixture_f2(x, p);
                        worst_mix = std::max(
                            worst_mix, std::abs(mix / dpln_pdf(x, p) - 1.0));
                    }
                }
    report(1, worst_norm < 1e-6 && worst_mix < 1e-10,
           "density normalization and mixture identity on the 48-point grid",
           "max |integral-1| " + fmt(worst_norm) + ", max mixture rel err " + fmt(worst_mix));
}

// --- 2: Monte Carlo mean of 10^7 samples vs the closed-form first moment ---
void check_sampler_moment() {
    const DplnParams p{3.0, 2.0, 0.5, 0.25};
    RngStream rng(2024);
    double sum = 0.0, sq = 0.0;
    const std::size_t n = 10000000;
    for (std::size_t i = 0; i < n; ++i) {
        const double x =
            std::exp(rng.normal(p.nu, p.tau()) + rng.exponential(p.alpha) - rng.exponential(p.beta));
        sum += x;
        sq += x * x;
    }
    const double mean = sum / static_cast<double>(n);
    const double se = std::sqrt((sq / n - mean * mean) / static_cast<double>(n));
    const double dev = std::abs(mean - dpln_moment(1.0, p));
    report(2, dev < 3.0 * se, "sampler mean matches E(X) within 3 standard errors",
           "deviation " + fmt(dev) + " vs 3se " + fmt(3.0 * se));
}

// --- 3: conditional samplers vs their analytic laws at 10^6 draws ---
void check_conditionals() {
    const DplnParams p{2.0, 1.5, 0.3, 0.8};
    const double y = 0.9;
    const double tau = p.tau();
    const double w_up = z_mixture_upper_weight(y, p);
    const double mu_up = p.nu - p.tau2 * p.beta;
    const double mu_lo = p.nu + p.tau2 * p.alpha;
    const auto z_cdf = [&](double z) {
        if (z >= y) {
            const double a = (y - mu_up) / tau;
            return w_up * (norm_cdf((z - mu_up) / tau) - norm_cdf(a)) / norm_sf(a) +
                   (1.0 - w_up);
        }
        return (1.0 - w_up) * norm_cdf((z - mu_lo) / tau) / norm_cdf((y - mu_lo) / tau);
    };
    RngStream rng(31415);
    std::vector<double> draws(1000000);
    for (auto& d : draws) d = sample_z_given_y(y, p, rng);
    const double ks_z = testutil::ks_distance(draws, z_cdf);

    const double w = -0.4;  // truncation below zero exercises the max{w,0} lower end
    for (auto& d : draws) d = sample_e1_given_w(w, p.alpha, p.beta, rng);
    const double rate = p.alpha + p.beta;
    const double ks_e = testutil::ks_distance(
        draws, [&](double x) { return x < 0.0 ? 0.0 : 1.0 - std::exp(-rate * x); });
    report(3, ks_z < 0.005 && ks_e < 0.005,
           "latent conditional draws match their analytic densities",
           "KS(z|y) " + fmt(ks_z) + ", KS(e1|w) " + fmt(ks_e));
}

// --- 4: parameter recovery at desk scale ---
void check_recovery() {
    const DplnParams truth{0.25, 0.5, 1.0, 1.0};
    RngStream rng(8675309);
    const SampleBatch data = sample_dpln(1000, truth, rng);
    GibbsConfig cfg;
    cfg.iterations = 100000;
    cfg.burn_in = 10000;
    cfg.thin = 50;
    cfg.seed = 424242;
    const Chain chain = run_gibbs(data, PriorSpec{}, cfg);
    const PosteriorSummary s = summarize(chain);

    const double truth_v[4] = {0.25, 0.5, 1.0, 1.0};
    const double reported[4] = {0.2578, 0.4995, 1.065, 1.1848};
    const double tol[4] = {0.05, 0.10, 0.40, 0.60};
    bool ok = true;
    std::string detail;
    const char* names[] = {"alpha", "beta", "nu", "tau2"};
    for (int j = 0; j < 4; ++j) {
        const bool covered = truth_v[j] >= s.ci_low[j] && truth_v[j] <= s.ci_high[j];
        const bool close = std::abs(s.mean[j] - reported[j]) <= tol[j];
        ok = ok && covered && close;
        detail += std::string(names[j]) + " " + fmt(s.mean[j]) + (j < 3 ? ", " : "");
    }
    report(4, ok, "posterior recovers dPlN(0.25, 0.5, 1, 1) from n=1000", detail);
}

// --- 5: transform approximation accuracy and N trend ---
void check_tam_accuracy() {
    const DplnParams p{3.0, 2.0, 0.0, 0.25};
    const auto cal = calibrate(p, 2000, TamGrid::standard());

    RngStream rng(555);
    const auto sample = sample_dpln(1000000, p, rng);
    double worst = 0.0;
    for (double s : {0.1, 1.0, 10.0}) {
        double mc = 0.0;
        for (double x : sample.values) mc += std::exp(-s * x);
        mc /= static_cast<double>(sample.values.size());
        worst = std::max(worst, std::abs(eval_transform(cal.tam, s) - mc));
    }

    // Error trend against quadrature reference values of the exact transform.
    const double lo = p.nu - 10.0 * p.tau() - 40.0 / p.beta;
    const double hi = p.nu + 10.0 * p.tau() + 40.0 / p.alpha;
    double ref[3];
    const double svals[3] = {0.1, 1.0, 10.0};
    for (int k = 0; k < 3; ++k)
        ref[k] = testutil::integrate(
            [&](double y) { return std::exp(-svals[k] * std::exp(y)) * nl_pdf(y, p); }, lo, hi,
            1e-12);
    std::vector<double> errs;
    for (std::size_t n : {50u, 200u, 1000u, 4000u}) {
        const auto c = calibrate(p, n, TamGrid::standard());
        double e = 0.0;
        for (int k = 0; k < 3; ++k)
            e = std::max(e, std::abs(eval_transform(c.tam, svals[k]) - ref[k]));
        errs.push_back(e);
    }
    bool trend = errs.back() < errs.front();
    for (std::size_t i = 1; i < errs.size(); ++i) trend = trend && errs[i] <= errs[i - 1] * 1.5;

    report(5, worst < 5e-3 && cal.target_met && trend,
           "calibrated transform approximation is accurate and improves with N",
           "max |f*_N - MC| " + fmt(worst) + ", residual " + fmt(cal.residual) + ", trend " +
               fmt(errs.front()) + "->" + fmt(errs.back()));
}

// --- 6: M/M/1 closed forms through the full numerical pipeline ---
void check_mm1_gauntlet() {
    const double lambda = 1.0, mu = 2.0, rho = 0.5;
    // Exponential quantiles through the generic TAM machinery.
    const double split = 1.0 - std::exp(-1.0);
    const auto build = [&](double rate) {
        const auto probs = hybrid_probs(1000, 0.5, 0.9, split);
        std::vector<double> quant(probs.size());
        for (std::size_t i = 0; i < probs.size(); ++i)
            quant[i] = -std::log1p(-probs[i]) / rate;
        return build_tam_from_quantiles(probs, quant, 0.5, 0.9, split);
    };

    const double r0 = solve_r0(build(lambda), mu);  // interarrival transform side
    const double r0_err = std::abs(r0 - lambda / mu);

    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(0.1 * i);
    const auto inv = invert_wq(lambda, rho, build(mu), grid);  // service transform side
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double exact = 1.0 - rho * std::exp(-mu * (1.0 - rho) * grid[i]);
        sup = std::max(sup, std::abs(inv.value[i] - exact));
    }
    report(6, r0_err < 1e-3 && sup < 1e-3,
           "M/M/1 closed forms reproduced by the TAM + root + inversion pipeline",
           "|r0 - lambda/mu| " + fmt(r0_err) + ", waiting-cdf sup err " + fmt(sup));
}

// --- 7: simulation cross-validation of both queue directions ---
void check_simulation_cross() {
    const DplnParams p{3.0, 2.0, 0.0, 0.25};
    const double ex = dpln_moment(1.0, p);
    const auto cal = calibrate(p, 1000, TamGrid::standard());

    // G/M/1: dPlN interarrivals, service rate tuned to rho = 0.5.
    const double mu = 1.0 / (0.5 * ex);
    const double r0 = solve_r0(cal.tam, mu);
    SimConfig gm1;
    gm1.n_customers = 1000000;
    gm1.warmup = 100000;
    gm1.seed = 71;
    gm1.arrival_law = p;
    gm1.service_law = ExponentialLaw{mu};
    const SimResult gm1_res = simulate(gm1);
    // Consecutive arrivals see correlated queue states; stride far past the
    // relaxation time so the chi-square multinomial assumption holds.
    const std::size_t stride = 25;
    std::vector<double> observed;
    double n_obs = 0.0;
    for (std::size_t i = 0; i < gm1_res.pre_arrival_sizes.size(); i += stride) {
        const std::size_t k = gm1_res.pre_arrival_sizes[i];
        if (observed.size() <= k) observed.resize(k + 1, 0.0);
        observed[k] += 1.0;
        n_obs += 1.0;
    }
    std::vector<double> geom;
    for (int n = 0; n < 60; ++n) geom.push_back((1.0 - r0) * std::pow(r0, n));
    const double pval = testutil::chi_square_p(observed, geom, n_obs);

    // M/G/1: dPlN service, arrival rate tuned to rho = 0.5.
    const double lambda = 0.5 / ex;
    SimConfig mg1;
    mg1.n_customers = 1000000;
    mg1.warmup = 100000;
    mg1.seed = 72;
    mg1.arrival_law = ExponentialLaw{lambda};
    mg1.service_law = p;
    const SimResult mg1_res = simulate(mg1);
    std::vector<double> sorted = mg1_res.waiting_times;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> grid;
    for (int i = 0; i <= 400; ++i) grid.push_back(0.05 * i);
    const auto inv = invert_wq(lambda, 0.5, cal.tam, grid);
    double ks = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), grid[i]);
        const double emp =
            static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
        ks = std::max(ks, std::abs(emp - inv.value[i]));
    }
    report(7, pval > 0.01 && ks < 0.01,
           "simulated queues agree with the analytic steady-state laws",
           "chi-square p " + fmt(pval) + ", waiting-cdf KS " + fmt(ks));
}

// --- 8: ruin identities on a 500-draw posterior chain ---
void check_ruin_identities() {
    const DplnParams truth{3.0, 2.0, 0.0, 0.25};
    RngStream rng(606);
    const SampleBatch data = sample_dpln(300, truth, rng);
    GibbsConfig cfg;
    cfg.iterations = 5980;
    cfg.burn_in = 1000;
    cfg.thin = 10;
    cfg.seed = 607;
    Chain chain = run_gibbs(data, PriorSpec{}, cfg);
    chain.draws.resize(498);
    chain.draws.push_back({0.9, 2.0, 0.0, 0.25});  // infinite claim mean
    chain.draws.push_back({3.0, 2.0, 3.0, 0.25});  // rho >= 1

    const double lambda = 0.3 / dpln_moment(1.0, truth);
    QueueOptions opts;
    opts.tam_n = 300;
    const std::vector<double> u{0.0, 1.0, 5.0, 20.0};
    const auto surf = ruin_surface(u, lambda, chain, opts);

    double worst_atom = 0.0;
    bool monotone = true;
    bool certain_ok = true;
    std::size_t n_stable = 0;
    for (std::size_t j = 0; j < chain.draws.size(); ++j) {
        const auto rho = mg1_rho(chain.draws[j], lambda);
        const auto& psi = surf.per_draw[j];
        for (std::size_t i = 1; i < psi.size(); ++i) monotone = monotone && psi[i] <= psi[i - 1];
        if (rho && *rho < 1.0) {
            ++n_stable;
            worst_atom = std::max(worst_atom, std::abs(psi[0] - *rho));
        } else {
            for (double v : psi) certain_ok = certain_ok && v == 1.0;
        }
    }
    report(8, worst_atom < 2e-3 && monotone && certain_ok && n_stable > 400,
           "ruin probabilities honor the duality identities per posterior draw",
           "max |psi(0)-rho| " + fmt(worst_atom) + ", stable draws " +
               std::to_string(n_stable) + "/" + std::to_string(chain.draws.size()));
}

// --- 9 (optional): published-table reproduction from the external trace ---
void check_published_tables() {
    std::vector<std::string> candidates;
    if (const char* env = std::getenv("DPLN_BC_TRACE")) candidates.push_back(env);
    candidates.push_back("data/bc_paug89_interarrivals.txt");
    candidates.push_back("../data/bc_paug89_interarrivals.txt");
    std::string path;
    for (const auto& c : candidates)
        if (std::ifstream(c).good()) {
            path = c;
            break;
        }
    if (path.empty()) {
        std::printf("criterion 9: SKIP — external interarrival trace not present "
                    "(set DPLN_BC_TRACE to enable)\n");
        return;
    }

    SampleBatch data;
    {
        std::ifstream is(path);
        double v;
        while (is >> v) data.values.push_back(v);
    }
    GibbsConfig cfg;
    cfg.iterations = 100000;
    cfg.burn_in = 10000;
    cfg.thin = 50;
    cfg.seed = 909;
    const Chain chain = run_gibbs(data, PriorSpec{}, cfg);
    const PosteriorSummary s = summarize(chain);
    const double ref[4] = {2.15, 1.07, -6.00, 0.36};
    bool ok = true;
    for (int j = 0; j < 4; ++j)
        ok = ok && std::abs(s.mean[j] - ref[j]) <= 0.10 * std::abs(ref[j]);

    QueueOptions opts;
    opts.stride = 4;
    const auto rep = gm1_posterior(chain, 1500.0, opts);
    ok = ok && rep.p_stable == 1.0;
    ok = ok && std::abs(rep.mean_rho - 0.2616) <= 0.02;
    ok = ok && std::abs(rep.queue_pmf[0] - 0.3167) <= 0.02;
    report(9, ok, "published posterior and queue tables reproduced from the trace",
           "means " + fmt(s.mean[0]) + "/" + fmt(s.mean[1]) + "/" + fmt(s.mean[2]) + "/" +
               fmt(s.mean[3]) + ", E(rho) " + fmt(rep.mean_rho) + ", P(Q=0) " +
               fmt(rep.queue_pmf.empty() ? -1.0 : rep.queue_pmf[0]));
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    check_density_grid();
    check_sampler_moment();
    check_conditionals();
    check_recovery();
    check_tam_accuracy();
    check_mm1_gauntlet();
    check_simulation_cross();
    check_ruin_identities();
    check_published_tables();
    const auto dt = std::chrono::duration_cast<std::chrono::seconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    std::printf("%s (%d failure%s, %llds)\n", failures == 0 ? "ALL PASS" : "FAILURES",
                failures, failures == 1 ? "" : "s", static_cast<long long>(dt));
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
