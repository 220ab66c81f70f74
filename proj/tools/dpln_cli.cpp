// Command-line front end: fit / gm1 / mg1 / ruin / simulate / tam-diag.
// All outputs are tab-separated text with '#' headers echoing the effective
// configuration, plus a manifest.json per run.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpln/density.hpp"
#include "dpln/gibbs.hpp"
#include "dpln/parallel.hpp"
#include "dpln/queueing.hpp"
#include "dpln/simulate.hpp"
#include "dpln/tam.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<double> read_data_file(const std::string& path, bool require_positive) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open data file: " + path);
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ss(line);
        double v;
        if (!(ss >> v) || !std::isfinite(v))
            throw std::runtime_error(path + ": unparseable value at line " + std::to_string(lineno));
        if (require_positive && !(v > 0.0))
            throw std::runtime_error(path + ": nonpositive value at line " + std::to_string(lineno));
        values.push_back(v);
    }
    if (values.empty()) throw std::runtime_error(path + ": no data values found");
    return values;
}

std::ofstream open_output(const fs::path& dir, const std::string& name, const json& config) {
    fs::create_directories(dir);
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("cannot open output file: " + (dir / name).string());
    os << "# " << name << "\n# config: " << config.dump() << "\n";
    os << std::setprecision(12);
    return os;
}

void write_manifest(const fs::path& dir, const json& config, const std::vector<std::string>& outputs) {
    json m;
    m["config"] = config;
    m["outputs"] = outputs;
    std::ofstream os(dir / "manifest.json");
    os << m.dump(2) << "\n";
}

// Parse "exp:RATE", "dpln:A,B,NU,TAU2" or "det:VALUE".
dpln::SimLaw parse_law(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("law", "expected kind:params");
    const std::string kind = text.substr(0, colon);
    std::vector<double> vals;
    std::stringstream ss(text.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    if (kind == "exp" && vals.size() == 1) return dpln::ExponentialLaw{vals[0]};
    if (kind == "det" && vals.size() == 1) return dpln::DeterministicLaw{vals[0]};
    if (kind == "dpln" && vals.size() == 4) return dpln::DplnParams{vals[0], vals[1], vals[2], vals[3]};
    throw CLI::ValidationError("law", "expected exp:rate, det:value or dpln:a,b,nu,tau2");
}

struct CommonOpts {
    std::string out_dir = "out";
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--out-dir", c.out_dir, "Output directory");
    cmd->add_option("--seed", c.seed, "RNG seed");
}

int cmd_fit(const std::string& data_file, const CommonOpts& common, dpln::GibbsConfig cfg,
            const dpln::PriorSpec& prior) {
    dpln::SampleBatch data;
    data.values = read_data_file(data_file, true);
    data.scale_tag = dpln::ScaleTag::raw;
    cfg.seed = common.seed;

    const dpln::Chain chain = dpln::run_gibbs(data, prior, cfg);
    const dpln::PosteriorSummary sum = dpln::summarize(chain);

    json config{{"command", "fit"},
                {"data", data_file},
                {"n", data.values.size()},
                {"iterations", cfg.iterations},
                {"burn_in", cfg.burn_in},
                {"thin", cfg.thin},
                {"seed", cfg.seed},
                {"prior", {prior.m, prior.k, prior.a, prior.b, prior.c_alpha, prior.d_alpha,
                           prior.c_beta, prior.d_beta}}};

    const fs::path dir(common.out_dir);
    fs::create_directories(dir);
    dpln::save_chain_file((dir / "chain.tsv").string(), chain);

    {
        auto os = open_output(dir, "summary.tsv", config);
        os << "# parameter\tmean\tci_low\tci_high\n";
        const char* names[] = {"alpha", "beta", "nu", "tau2"};
        for (int j = 0; j < 4; ++j)
            os << names[j] << '\t' << sum.mean[j] << '\t' << sum.ci_low[j] << '\t'
               << sum.ci_high[j] << '\n';
        os << "# correlation matrix (alpha beta nu tau2)\n";
        for (int j = 0; j < 4; ++j) {
            os << "corr";
            for (int l = 0; l < 4; ++l) os << '\t' << sum.correlation[j][l];
            os << '\n';
        }
    }
    {
        // Predictive density of Y = log X on an automatic grid spanning the data.
        std::vector<double> logs;
        logs.reserve(data.values.size());
        for (double v : data.values) logs.push_back(std::log(v));
        const auto [lo, hi] = std::minmax_element(logs.begin(), logs.end());
        const double pad = 0.1 * (*hi - *lo);
        std::vector<double> grid;
        for (int i = 0; i <= 400; ++i)
            grid.push_back(*lo - pad + (*hi - *lo + 2 * pad) * i / 400.0);
        const auto dens = dpln::predictive_density(chain, grid, dpln::ScaleTag::log);
        auto os = open_output(dir, "predictive.tsv", config);
        os << "# log_x\tdensity\n";
        for (std::size_t i = 0; i < grid.size(); ++i) os << grid[i] << '\t' << dens[i] << '\n';
    }
    write_manifest(dir, config, {"chain.tsv", "summary.tsv", "predictive.tsv"});
    return 0;
}

void write_gm1_report(const fs::path& dir, const json& config, double mu,
                      const dpln::Gm1PosteriorReport& rep, std::vector<std::string>& outputs,
                      const std::string& suffix) {
    {
        auto os = open_output(dir, "gm1_report" + suffix + ".tsv", config);
        os << "# mu\tp_stable\tmean_rho\tn_stable\tn_always_stable\tn_draws\tstride\n";
        os << mu << '\t' << rep.p_stable << '\t' << rep.mean_rho << '\t' << rep.n_stable << '\t'
           << rep.n_always_stable << '\t' << rep.n_draws_used << '\t' << rep.stride << '\n';
        if (rep.n_always_stable == rep.n_draws_used)
            os << "# note: every draw has alpha <= 1; system always stable\n";
        if (rep.n_stable == 0) os << "# note: no stable draws, no equilibrium distributions\n";
        outputs.push_back("gm1_report" + suffix + ".tsv");
    }
    if (rep.n_stable == 0) return;
    {
        auto os = open_output(dir, "queue_pmf" + suffix + ".tsv", config);
        os << "# n\tP(Q=n|data)\n";
        for (std::size_t n = 0; n < rep.queue_pmf.size(); ++n)
            os << n << '\t' << rep.queue_pmf[n] << '\n';
        outputs.push_back("queue_pmf" + suffix + ".tsv");
    }
    {
        auto os = open_output(dir, "waiting_cdf" + suffix + ".tsv", config);
        os << "# t\tWq_cdf\tW_cdf\n";
        for (std::size_t i = 0; i < rep.time_grid.size(); ++i)
            os << rep.time_grid[i] << '\t' << rep.wq_cdf[i] << '\t' << rep.w_cdf[i] << '\n';
        outputs.push_back("waiting_cdf" + suffix + ".tsv");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian fitting of the double Pareto lognormal distribution and "
                 "steady-state analysis of the associated single-server queues"};
    app.set_config("--config", "", "Read options from an INI/TOML config file");
    app.require_subcommand(1);
    // Repeated flags take the last value; command line overrides config file.
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "Fit dPlN parameters by Gibbs sampling");
    std::string fit_data;
    CommonOpts fit_common;
    dpln::GibbsConfig gibbs_cfg;
    gibbs_cfg.iterations = 100000;
    gibbs_cfg.burn_in = 10000;
    dpln::PriorSpec prior;
    bool burn_in_set = false;
    fit->add_option("--data", fit_data, "Data file, one positive value per line")->required();
    add_common(fit, fit_common);
    fit->add_option("--iterations", gibbs_cfg.iterations, "Gibbs iterations");
    fit->add_option("--thin", gibbs_cfg.thin, "Thinning interval");
    fit->add_option("--burn-in", gibbs_cfg.burn_in, "Burn-in iterations (default 10%)")
        ->each([&](const std::string&) { burn_in_set = true; });
    fit->add_option("--prior-m", prior.m);
    fit->add_option("--prior-k", prior.k);
    fit->add_option("--prior-a", prior.a);
    fit->add_option("--prior-b", prior.b);
    fit->add_option("--prior-c-alpha", prior.c_alpha);
    fit->add_option("--prior-d-alpha", prior.d_alpha);
    fit->add_option("--prior-c-beta", prior.c_beta);
    fit->add_option("--prior-d-beta", prior.d_beta);

    // ---- gm1 ----
    auto* gm1 = app.add_subcommand("gm1", "dPlN/M/1 posterior queue analysis");
    std::string gm1_chain, gm1_service_data, mu_list_text;
    double gm1_mu = 0.0;
    CommonOpts gm1_common;
    dpln::QueueOptions gm1_opts;
    gm1->add_option("--chain", gm1_chain, "Chain file from fit")->required();
    gm1->add_option("--mu", gm1_mu, "Fixed service rate");
    gm1->add_option("--mu-list", mu_list_text, "Comma-separated service rates (sweep)");
    gm1->add_option("--service-data", gm1_service_data,
                    "Service durations for conjugate rate inference");
    gm1->add_option("--tam-n", gm1_opts.tam_n, "TAM support size");
    gm1->add_option("--stride", gm1_opts.stride, "Use every stride-th draw");
    add_common(gm1, gm1_common);

    // ---- mg1 ----
    auto* mg1 = app.add_subcommand("mg1", "M/dPlN/1 posterior waiting-time analysis");
    std::string mg1_chain;
    double mg1_lambda = 0.0;
    CommonOpts mg1_common;
    dpln::QueueOptions mg1_opts;
    mg1->add_option("--chain", mg1_chain, "Chain file from fit")->required();
    mg1->add_option("--lambda", mg1_lambda, "Arrival rate")->required();
    mg1->add_option("--tam-n", mg1_opts.tam_n, "TAM support size");
    mg1->add_option("--stride", mg1_opts.stride, "Use every stride-th draw");
    add_common(mg1, mg1_common);

    // ---- ruin ----
    auto* ruin = app.add_subcommand("ruin", "Posterior ruin probabilities (M/G/1 duality)");
    std::string ruin_chain, ruin_interclaim_data, u_grid_text = "0", lambda_list_text;
    double ruin_lambda = 0.0;
    CommonOpts ruin_common;
    dpln::QueueOptions ruin_opts;
    ruin->add_option("--chain", ruin_chain, "Chain file fitted to claim sizes")->required();
    ruin->add_option("--lambda", ruin_lambda, "Claim arrival rate");
    ruin->add_option("--lambda-list", lambda_list_text, "Comma-separated claim rates");
    ruin->add_option("--interclaim-data", ruin_interclaim_data,
                     "Interclaim times for conjugate rate inference");
    ruin->add_option("--u-grid", u_grid_text, "Comma-separated initial reserves");
    ruin->add_option("--tam-n", ruin_opts.tam_n, "TAM support size");
    ruin->add_option("--stride", ruin_opts.stride, "Use every stride-th draw");
    add_common(ruin, ruin_common);

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Discrete-event single-server queue simulation");
    std::string arrival_text = "exp:1.0", service_text = "exp:2.0";
    dpln::SimConfig sim_cfg;
    CommonOpts sim_common;
    bool warmup_set = false;
    sim->add_option("--arrival", arrival_text, "Arrival law: exp:rate | dpln:a,b,nu,tau2 | det:v");
    sim->add_option("--service", service_text, "Service law, same syntax");
    sim->add_option("--n-customers", sim_cfg.n_customers, "Customers to simulate");
    sim->add_option("--warmup", sim_cfg.warmup, "Warmup customers (default 10%)")
        ->each([&](const std::string&) { warmup_set = true; });
    add_common(sim, sim_common);

    // ---- tam-diag ----
    auto* diag = app.add_subcommand("tam-diag", "Dump a calibrated TAM and accuracy sweep");
    std::vector<double> diag_theta;
    std::size_t diag_n = 1000;
    CommonOpts diag_common;
    diag->add_option("--theta", diag_theta, "alpha beta nu tau2")->expected(4)->required();
    diag->add_option("--tam-n", diag_n, "TAM support size");
    add_common(diag, diag_common);

    for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; })) {
        sc->fallthrough();   // accept app-level flags like --config after the subcommand
        sc->configurable();  // allow [subcommand] sections in config files
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fit) {
            if (!burn_in_set) gibbs_cfg.burn_in = gibbs_cfg.iterations / 10;
            return cmd_fit(fit_data, fit_common, gibbs_cfg, prior);
        }

        if (*gm1) {
            const dpln::Chain chain = dpln::load_chain_file(gm1_chain);
            const fs::path dir(gm1_common.out_dir);
            std::vector<std::string> outputs;
            json config{{"command", "gm1"}, {"chain", gm1_chain}, {"tam_n", gm1_opts.tam_n},
                        {"stride", gm1_opts.stride}, {"seed", gm1_common.seed}};

            if (!gm1_service_data.empty()) {
                const auto durations = read_data_file(gm1_service_data, true);
                dpln::RngStream rng(gm1_common.seed);
                const auto mu_draws =
                    dpln::fit_exponential_rate(durations, 1.0, 1.0, rng, chain.draws.size());
                config["service_data"] = gm1_service_data;
                const auto rep = dpln::gm1_posterior(chain, mu_draws, gm1_opts);
                double mu_mean = 0.0;
                for (double m : mu_draws) mu_mean += m;
                mu_mean /= static_cast<double>(mu_draws.size());
                write_gm1_report(dir, config, mu_mean, rep, outputs, "");
                auto os = open_output(dir, "mu_posterior.tsv", config);
                os << "# posterior service-rate draws (conjugate gamma)\n# mu\n";
                for (double m : mu_draws) os << m << '\n';
                outputs.push_back("mu_posterior.tsv");
            } else if (!mu_list_text.empty()) {
                std::vector<double> mus;
                std::stringstream ss(mu_list_text);
                std::string tok;
                while (std::getline(ss, tok, ',')) mus.push_back(std::stod(tok));
                config["mu_list"] = mus;
                auto os = open_output(dir, "gm1_sweep.tsv", config);
                os << "# mu\tE(S)\tp_stable\tmean_rho\n";
                for (double mu : mus) {
                    dpln::QueueOptions cheap = gm1_opts;
                    const auto rep = dpln::gm1_posterior(chain, mu, cheap);
                    os << mu << '\t' << 1.0 / mu << '\t' << rep.p_stable << '\t' << rep.mean_rho
                       << '\n';
                }
                outputs.push_back("gm1_sweep.tsv");
            } else if (gm1_mu > 0.0) {
                config["mu"] = gm1_mu;
                const auto rep = dpln::gm1_posterior(chain, gm1_mu, gm1_opts);
                write_gm1_report(dir, config, gm1_mu, rep, outputs, "");
            } else {
                throw CLI::ValidationError("gm1", "one of --mu, --mu-list or --service-data required");
            }
            write_manifest(dir, config, outputs);
            return 0;
        }

        if (*mg1) {
            const dpln::Chain chain = dpln::load_chain_file(mg1_chain);
            const fs::path dir(mg1_common.out_dir);
            json config{{"command", "mg1"}, {"chain", mg1_chain}, {"lambda", mg1_lambda},
                        {"tam_n", mg1_opts.tam_n}, {"stride", mg1_opts.stride}};
            const auto rep = dpln::mg1_posterior(chain, mg1_lambda, mg1_opts);
            std::vector<std::string> outputs;
            {
                auto os = open_output(dir, "mg1_report.tsv", config);
                os << "# lambda\tp_stable\tmean_rho_stable\tn_stable\tn_draws\tstride\n";
                os << mg1_lambda << '\t' << rep.p_stable << '\t' << rep.mean_rho_stable << '\t'
                   << rep.n_stable << '\t' << rep.n_draws_used << '\t' << rep.stride << '\n';
                outputs.push_back("mg1_report.tsv");
            }
            if (rep.n_stable > 0) {
                auto os = open_output(dir, "wq_cdf.tsv", config);
                os << "# t\tWq_cdf\n";
                for (std::size_t i = 0; i < rep.time_grid.size(); ++i)
                    os << rep.time_grid[i] << '\t' << rep.wq_cdf[i] << '\n';
                outputs.push_back("wq_cdf.tsv");
            }
            write_manifest(dir, config, outputs);
            return 0;
        }

        if (*ruin) {
            const dpln::Chain chain = dpln::load_chain_file(ruin_chain);
            const fs::path dir(ruin_common.out_dir);
            std::vector<double> u_grid;
            {
                std::stringstream ss(u_grid_text);
                std::string tok;
                while (std::getline(ss, tok, ',')) u_grid.push_back(std::stod(tok));
            }
            std::vector<double> lambdas;
            if (!lambda_list_text.empty()) {
                std::stringstream ss(lambda_list_text);
                std::string tok;
                while (std::getline(ss, tok, ',')) lambdas.push_back(std::stod(tok));
            } else if (ruin_lambda > 0.0) {
                lambdas.push_back(ruin_lambda);
            } else if (!ruin_interclaim_data.empty()) {
                // Posterior mean claim rate from interclaim times.
                const auto times = read_data_file(ruin_interclaim_data, true);
                dpln::RngStream rng(ruin_common.seed);
                const auto draws = dpln::fit_exponential_rate(times, 1.0, 1.0, rng, 2000);
                double mean = 0.0;
                for (double d : draws) mean += d;
                lambdas.push_back(mean / static_cast<double>(draws.size()));
            } else {
                throw CLI::ValidationError("ruin",
                                           "one of --lambda, --lambda-list or --interclaim-data required");
            }

            json config{{"command", "ruin"}, {"chain", ruin_chain}, {"u_grid", u_grid},
                        {"lambdas", lambdas}, {"tam_n", ruin_opts.tam_n},
                        {"stride", ruin_opts.stride}};
            auto os = open_output(dir, "ruin_surface.tsv", config);
            os << "# u\tinv_lambda\tE_psi\n";
            for (double lam : lambdas) {
                const auto surf = dpln::ruin_surface(u_grid, lam, chain, ruin_opts);
                for (std::size_t i = 0; i < u_grid.size(); ++i)
                    os << u_grid[i] << '\t' << 1.0 / lam << '\t' << surf.mean_psi[i] << '\n';
            }
            write_manifest(dir, config, {"ruin_surface.tsv"});
            return 0;
        }

        if (*sim) {
            sim_cfg.arrival_law = parse_law(arrival_text);
            sim_cfg.service_law = parse_law(service_text);
            sim_cfg.seed = sim_common.seed;
            if (!warmup_set) sim_cfg.warmup = sim_cfg.n_customers / 10;
            const auto res = dpln::simulate(sim_cfg);

            json config{{"command", "simulate"}, {"arrival", arrival_text},
                        {"service", service_text}, {"n_customers", sim_cfg.n_customers},
                        {"warmup", sim_cfg.warmup}, {"seed", sim_cfg.seed}};
            const fs::path dir(sim_common.out_dir);
            {
                auto os = open_output(dir, "sim_summary.tsv", config);
                os << "# mean_wq\tmean_wq_se\tutilization\tn_observed\n";
                os << res.mean_wq << '\t' << res.mean_wq_se << '\t' << res.utilization << '\t'
                   << res.waiting_times.size() << '\n';
            }
            {
                auto os = open_output(dir, "pre_arrival_hist.tsv", config);
                os << "# system_size\tcount\n";
                for (std::size_t n = 0; n < res.pre_arrival_counts.size(); ++n)
                    os << n << '\t' << res.pre_arrival_counts[n] << '\n';
            }
            {
                // Empirical waiting-time cdf on 1000 quantiles.
                std::vector<double> sorted = res.waiting_times;
                std::sort(sorted.begin(), sorted.end());
                auto os = open_output(dir, "wq_ecdf.tsv", config);
                os << "# t\tecdf\n";
                for (int i = 1; i <= 1000; ++i) {
                    const double p = i / 1000.0;
                    const auto k = std::min(sorted.size() - 1,
                                            static_cast<std::size_t>(p * sorted.size()));
                    os << sorted[k] << '\t' << p << '\n';
                }
            }
            write_manifest(dir, config, {"sim_summary.tsv", "pre_arrival_hist.tsv", "wq_ecdf.tsv"});
            return 0;
        }

        if (*diag) {
            const dpln::DplnParams theta{diag_theta[0], diag_theta[1], diag_theta[2], diag_theta[3]};
            const auto cal = dpln::calibrate(theta, diag_n, dpln::TamGrid::standard());
            json config{{"command", "tam-diag"}, {"theta", diag_theta}, {"tam_n", diag_n},
                        {"r_star", cal.r_star}, {"q_star", cal.q_star},
                        {"residual", cal.residual}, {"target_met", cal.target_met}};
            const fs::path dir(diag_common.out_dir);
            {
                auto os = open_output(dir, "tam.tsv", config);
                dpln::save_tam(os, cal.tam);
            }
            {
                // Transform accuracy vs a seeded Monte Carlo estimate of E[exp(-sX)].
                dpln::RngStream rng(diag_common.seed);
                const auto sample = dpln::sample_dpln(1000000, theta, rng);
                auto os = open_output(dir, "transform_sweep.tsv", config);
                os << "# s\tf_tam\tf_mc\tabs_err\n";
                for (double s : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0}) {
                    double mc = 0.0;
                    for (double x : sample.values) mc += std::exp(-s * x);
                    mc /= static_cast<double>(sample.values.size());
                    const double ft = dpln::eval_transform(cal.tam, s);
                    os << s << '\t' << ft << '\t' << mc << '\t' << std::abs(ft - mc) << '\n';
                }
            }
            write_manifest(dir, config, {"tam.tsv", "transform_sweep.tsv"});
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
