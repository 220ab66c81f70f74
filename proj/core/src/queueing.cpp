#include "dpln/queueing.hpp"

#include <algorithm>
#include <complex>
#include <limits>

#include "dpln/density.hpp"
#include "dpln/inversion.hpp"
#include "dpln/parallel.hpp"

namespace dpln {

namespace {

double mean_scale(const DplnParams& p) { return std::exp(p.nu + 0.5 * p.tau2); }

std::complex<double> eval_transform_c(const TamApprox& tam, std::complex<double> s) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < tam.points.size(); ++i)
        acc += tam.weights[i] * std::exp(-s * tam.points[i]);
    return acc;
}

std::vector<double> log_spaced_grid(double t_max, std::size_t n) {
    // 0 followed by n-1 log-spaced points up to t_max.
    std::vector<double> g;
    g.reserve(n);
    g.push_back(0.0);
    const double lo = std::log(t_max) - std::log(1e4);
    const double hi = std::log(t_max);
    for (std::size_t i = 1; i < n; ++i) {
        const double f = static_cast<double>(i - 1) / static_cast<double>(n - 2);
        g.push_back(std::exp(lo + f * (hi - lo)));
    }
    return g;
}

}  // namespace

std::optional<double> gm1_rho(const DplnParams& p, double mu) {
    p.validate();
    if (!(mu > 0.0)) throw std::domain_error("gm1_rho: mu must be positive");
    if (p.alpha <= 1.0) return std::nullopt;  // infinite mean interarrival: always stable
    return (p.alpha - 1.0) * (p.beta + 1.0) / (mu * p.alpha * p.beta * mean_scale(p));
}

std::optional<double> mg1_rho(const DplnParams& p, double lambda) {
    p.validate();
    if (!(lambda > 0.0)) throw std::domain_error("mg1_rho: lambda must be positive");
    if (p.alpha <= 1.0) return std::nullopt;  // infinite mean service: never stable
    return lambda * p.alpha * p.beta * mean_scale(p) / ((p.alpha - 1.0) * (p.beta + 1.0));
}

double solve_r0(const TamApprox& tam, double mu) {
    if (!(mu > 0.0)) throw std::domain_error("solve_r0: mu must be positive");
    const auto g = [&](double r) { return eval_transform(tam, mu * (1.0 - r)) - r; };

    double lo = 1e-12;
    double hi = 1.0 - 1e-9;
    double glo = g(lo);
    double ghi = g(hi);
    if (!(glo > 0.0) || !(ghi < 0.0))
        throw instability_error("solve_r0: no interior root, system unstable (rho >= 1)");

    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (std::abs(gm) <= 1e-12 || hi - lo < 1e-15) return mid;
        if (gm > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double wq_transform(double s, double lambda, double rho, const TamApprox& tam) {
    if (!(s > 0.0)) throw std::domain_error("wq_transform: s must be positive");
    if (!(rho < 1.0)) throw instability_error("wq_transform: requires rho < 1");
    const double denom = s - lambda * (1.0 - eval_transform(tam, s));
    if (std::abs(denom) < 1e-14)
        throw std::runtime_error("wq_transform: numerical singularity in denominator");
    return (1.0 - rho) * s / denom;
}

InvertedCdf invert_wq(double lambda, double rho, const TamApprox& tam,
                      const std::vector<double>& time_grid) {
    if (!(rho < 1.0)) throw instability_error("invert_wq: requires rho < 1");
    for (std::size_t i = 0; i < time_grid.size(); ++i) {
        if (time_grid[i] < 0.0 || (i > 0 && time_grid[i] <= time_grid[i - 1]))
            throw std::domain_error("invert_wq: time grid must be nonnegative increasing");
    }

    const EulerInversion inv;
    const auto cdf_transform = [&](std::complex<double> s) {
        // W*_q(s)/s, the transform of the cdf.
        const std::complex<double> denom = s - lambda * (1.0 - eval_transform_c(tam, s));
        return (1.0 - rho) / denom;
    };

    InvertedCdf out;
    out.t = time_grid;
    out.value.resize(time_grid.size());
    for (std::size_t i = 0; i < time_grid.size(); ++i) {
        const double t = time_grid[i] > 0.0 ? time_grid[i] : 1e-9;
        out.value[i] = inv.invert(cdf_transform, t);
    }

    // Clamp and enforce monotonicity, tracking the largest correction.
    double running = 0.0;
    for (double& v : out.value) {
        const double raw = v;
        v = std::clamp(v, 0.0, 1.0);
        v = std::max(v, running);
        running = v;
        out.max_adjustment = std::max(out.max_adjustment, std::abs(v - raw));
    }
    out.accuracy_warning = out.max_adjustment > 5e-3;
    return out;
}

namespace {

struct DrawOutcome {
    double rho = 0.0;
    double r0 = std::numeric_limits<double>::quiet_NaN();
    bool stable = false;
    bool always_stable = false;
};

std::vector<std::size_t> strided_indices(std::size_t n, std::size_t stride) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);
    return idx;
}

}  // namespace

Gm1PosteriorReport gm1_posterior(const Chain& chain, const std::vector<double>& mu_draws,
                                 const QueueOptions& opts) {
    if (chain.draws.empty()) throw std::invalid_argument("gm1_posterior: empty chain");
    if (mu_draws.size() < chain.draws.size())
        throw std::invalid_argument("gm1_posterior: mu_draws shorter than chain");
    const std::size_t stride = std::max<std::size_t>(opts.stride, 1);
    const auto idx = strided_indices(chain.draws.size(), stride);

    std::vector<DrawOutcome> outcomes(idx.size());
    parallel_for(idx.size(), [&](std::size_t j) {
        const DplnParams& theta = chain.draws[idx[j]];
        const double mu = mu_draws[idx[j]];
        DrawOutcome& o = outcomes[j];
        const auto rho = gm1_rho(theta, mu);
        if (!rho) {
            o.always_stable = true;
            o.stable = true;
            o.rho = 0.0;
        } else {
            o.rho = *rho;
            o.stable = *rho < 1.0;
        }
        if (o.stable) {
            const CalibrationResult cal = calibrate(theta, opts.tam_n, opts.grid);
            o.r0 = solve_r0(cal.tam, mu);
        }
    });

    Gm1PosteriorReport rep;
    rep.stride = stride;
    rep.n_draws_used = idx.size();
    for (const auto& o : outcomes) {
        rep.rho_draws.push_back(o.rho);
        rep.r0_draws.push_back(o.r0);
        rep.mean_rho += o.rho;
        if (o.stable) ++rep.n_stable;
        if (o.always_stable) ++rep.n_always_stable;
    }
    rep.mean_rho /= static_cast<double>(idx.size());
    rep.p_stable = static_cast<double>(rep.n_stable) / static_cast<double>(idx.size());
    if (rep.n_stable == 0) return rep;  // no-equilibrium report

    // Shared time grid from the average decay rate of the stable draws.
    if (!opts.time_grid.empty()) {
        rep.time_grid = opts.time_grid;
    } else {
        double rate = 0.0;
        std::size_t count = 0;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (!outcomes[j].stable) continue;
            rate += mu_draws[idx[j]] * (1.0 - outcomes[j].r0);
            ++count;
        }
        rate /= static_cast<double>(count);
        rep.time_grid = log_spaced_grid(-std::log(1e-3) / rate, 200);
    }

    rep.queue_pmf.assign(opts.queue_n_max + 1, 0.0);
    rep.wq_cdf.assign(rep.time_grid.size(), 0.0);
    rep.w_cdf.assign(rep.time_grid.size(), 0.0);
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (!outcomes[j].stable) continue;
        const Gm1Solution sol{outcomes[j].rho, outcomes[j].r0, mu_draws[idx[j]]};
        for (std::size_t n = 0; n <= opts.queue_n_max; ++n)
            rep.queue_pmf[n] += sol.queue_pmf(static_cast<unsigned>(n));
        for (std::size_t i = 0; i < rep.time_grid.size(); ++i) {
            rep.wq_cdf[i] += sol.wq_cdf(rep.time_grid[i]);
            rep.w_cdf[i] += sol.w_cdf(rep.time_grid[i]);
        }
    }
    const auto ns = static_cast<double>(rep.n_stable);
    for (double& v : rep.queue_pmf) v /= ns;
    for (double& v : rep.wq_cdf) v /= ns;
    for (double& v : rep.w_cdf) v /= ns;
    return rep;
}

Gm1PosteriorReport gm1_posterior(const Chain& chain, double mu, const QueueOptions& opts) {
    if (!(mu > 0.0)) throw std::domain_error("gm1_posterior: mu must be positive");
    return gm1_posterior(chain, std::vector<double>(chain.draws.size(), mu), opts);
}

Mg1PosteriorReport mg1_posterior(const Chain& chain, double lambda, const QueueOptions& opts) {
    if (chain.draws.empty()) throw std::invalid_argument("mg1_posterior: empty chain");
    const std::size_t stride = std::max<std::size_t>(opts.stride, 1);
    const auto idx = strided_indices(chain.draws.size(), stride);

    Mg1PosteriorReport rep;
    rep.stride = stride;
    rep.n_draws_used = idx.size();
    rep.rho_draws.resize(idx.size());

    std::vector<int> stable(idx.size(), 0);
    for (std::size_t j = 0; j < idx.size(); ++j) {
        const auto rho = mg1_rho(chain.draws[idx[j]], lambda);
        rep.rho_draws[j] = rho ? *rho : std::numeric_limits<double>::infinity();
        stable[j] = rho && *rho < 1.0;
        if (stable[j]) {
            rep.mean_rho_stable += *rho;
            ++rep.n_stable;
        }
    }
    rep.p_stable = static_cast<double>(rep.n_stable) / static_cast<double>(idx.size());
    if (rep.n_stable == 0) return rep;
    rep.mean_rho_stable /= static_cast<double>(rep.n_stable);

    if (!opts.time_grid.empty()) {
        rep.time_grid = opts.time_grid;
    } else {
        // Scale the grid to the mean service time of the stable draws.
        double scale = 0.0;
        for (std::size_t j = 0; j < idx.size(); ++j)
            if (stable[j]) scale += dpln_moment(1.0, chain.draws[idx[j]]);
        scale /= static_cast<double>(rep.n_stable);
        rep.time_grid = log_spaced_grid(scale * 100.0, 200);
    }

    std::vector<std::vector<double>> cdfs(idx.size());
    parallel_for(idx.size(), [&](std::size_t j) {
        if (!stable[j]) return;
        const DplnParams& theta = chain.draws[idx[j]];
        const CalibrationResult cal = calibrate(theta, opts.tam_n, opts.grid);
        const InvertedCdf inv = invert_wq(lambda, rep.rho_draws[j], cal.tam, rep.time_grid);
        cdfs[j] = inv.value;
    });

    rep.wq_cdf.assign(rep.time_grid.size(), 0.0);
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (!stable[j]) continue;
        for (std::size_t i = 0; i < rep.time_grid.size(); ++i) rep.wq_cdf[i] += cdfs[j][i];
    }
    for (double& v : rep.wq_cdf) v /= static_cast<double>(rep.n_stable);
    return rep;
}

RuinSurface ruin_surface(const std::vector<double>& u_grid, double lambda, const Chain& chain,
                         const QueueOptions& opts) {
    if (chain.draws.empty()) throw std::invalid_argument("ruin_surface: empty chain");
    if (!(lambda > 0.0)) throw std::domain_error("ruin_surface: lambda must be positive");
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
        if (u_grid[i] < 0.0 || (i > 0 && u_grid[i] <= u_grid[i - 1]))
            throw std::domain_error("ruin_surface: u grid must be nonnegative increasing");
    }
    const std::size_t stride = std::max<std::size_t>(opts.stride, 1);
    const auto idx = strided_indices(chain.draws.size(), stride);

    RuinSurface surf;
    surf.u_grid = u_grid;
    surf.n_draws_used = idx.size();
    surf.per_draw.assign(idx.size(), {});

    std::vector<int> certain(idx.size(), 0);
    parallel_for(idx.size(), [&](std::size_t j) {
        const DplnParams& theta = chain.draws[idx[j]];
        const auto rho = mg1_rho(theta, lambda);
        if (!rho || *rho >= 1.0) {
            certain[j] = 1;  // infinite claim mean or rho >= 1: eventual ruin is certain
            surf.per_draw[j].assign(u_grid.size(), 1.0);
            return;
        }
        const CalibrationResult cal = calibrate(theta, opts.tam_n, opts.grid);
        const InvertedCdf inv = invert_wq(lambda, *rho, cal.tam, u_grid);
        auto& psi = surf.per_draw[j];
        psi.resize(u_grid.size());
        for (std::size_t i = 0; i < u_grid.size(); ++i) {
            // psi(0) is the P-K atom complement, known exactly.
            psi[i] = (u_grid[i] == 0.0) ? *rho : 1.0 - inv.value[i];
            if (i > 0) psi[i] = std::min(psi[i], psi[i - 1]);
        }
    });

    surf.n_certain = static_cast<std::size_t>(std::count(certain.begin(), certain.end(), 1));
    surf.mean_psi.assign(u_grid.size(), 0.0);
    for (const auto& row : surf.per_draw)
        for (std::size_t i = 0; i < u_grid.size(); ++i) surf.mean_psi[i] += row[i];
    for (double& v : surf.mean_psi) v /= static_cast<double>(idx.size());
    return surf;
}

RuinResult ruin_probability(const RuinQuery& query, const Chain& chain,
                            const QueueOptions& opts) {
    if (query.u < 0.0) throw std::domain_error("ruin_probability: u must be >= 0");
    const RuinSurface surf = ruin_surface({query.u}, query.lambda, chain, opts);
    RuinResult res;
    res.mean_psi = surf.mean_psi[0];
    res.per_draw.reserve(surf.per_draw.size());
    for (const auto& row : surf.per_draw) res.per_draw.push_back(row[0]);
    return res;
}

}  // namespace dpln
