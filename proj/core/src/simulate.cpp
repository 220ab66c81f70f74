#include "dpln/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "dpln/density.hpp"

namespace dpln {

double draw_law(const SimLaw& law, RngStream& rng) {
    return std::visit(
        [&](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ExponentialLaw>) {
                return rng.exponential(l.rate);
            } else if constexpr (std::is_same_v<T, DplnParams>) {
                const double y = rng.normal(l.nu, l.tau()) + rng.exponential(l.alpha) -
                                 rng.exponential(l.beta);
                return std::exp(y);
            } else {
                return l.value;
            }
        },
        law);
}

double law_mean(const SimLaw& law) {
    return std::visit(
        [](const auto& l) -> double {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, ExponentialLaw>) {
                return 1.0 / l.rate;
            } else if constexpr (std::is_same_v<T, DplnParams>) {
                if (l.alpha <= 1.0) return std::numeric_limits<double>::infinity();
                return dpln_moment(1.0, l);
            } else {
                return l.value;
            }
        },
        law);
}

SimResult simulate(const SimConfig& cfg) {
    cfg.validate();
    RngStream arrivals_rng = RngStream(cfg.seed).split(0);
    RngStream service_rng = RngStream(cfg.seed).split(1);

    SimResult res;
    res.waiting_times.reserve(cfg.n_customers - cfg.warmup);

    double arrival_time = 0.0;
    double wq = 0.0;
    double prev_service = 0.0;
    double prev_interarrival = 0.0;
    double busy_time = 0.0;
    std::deque<double> departures;  // departure epochs of customers in system (FIFO: nondecreasing)

    for (std::size_t n = 0; n < cfg.n_customers; ++n) {
        if (n > 0) {
            const double interarrival = draw_law(cfg.arrival_law, arrivals_rng);
            prev_interarrival = interarrival;
            arrival_time += interarrival;
            wq = std::max(0.0, wq + prev_service - interarrival);
        }
        while (!departures.empty() && departures.front() <= arrival_time) departures.pop_front();
        const std::size_t system_size = departures.size();

        const double service = draw_law(cfg.service_law, service_rng);
        departures.push_back(arrival_time + wq + service);
        busy_time += service;
        prev_service = service;

        if (n >= cfg.warmup) {
            res.waiting_times.push_back(wq);
            res.pre_arrival_sizes.push_back(system_size);
            if (res.pre_arrival_counts.size() <= system_size)
                res.pre_arrival_counts.resize(system_size + 1, 0);
            ++res.pre_arrival_counts[system_size];
        }
    }

    const double elapsed = departures.empty() ? arrival_time : departures.back();
    res.utilization = busy_time / elapsed;

    const auto m = res.waiting_times.size();
    res.mean_wq = std::accumulate(res.waiting_times.begin(), res.waiting_times.end(), 0.0) /
                  static_cast<double>(m);

    // Batch-means SE over 20 batches (waiting times are autocorrelated).
    const std::size_t n_batches = 20;
    if (m >= n_batches) {
        const std::size_t bsize = m / n_batches;
        std::vector<double> means;
        for (std::size_t b = 0; b < n_batches; ++b) {
            const auto begin = res.waiting_times.begin() + static_cast<std::ptrdiff_t>(b * bsize);
            means.push_back(std::accumulate(begin, begin + static_cast<std::ptrdiff_t>(bsize), 0.0) /
                            static_cast<double>(bsize));
        }
        const double grand = std::accumulate(means.begin(), means.end(), 0.0) / n_batches;
        double ss = 0.0;
        for (double v : means) ss += (v - grand) * (v - grand);
        res.mean_wq_se = std::sqrt(ss / (n_batches - 1) / n_batches);
    }
    return res;
}

std::vector<double> simulate_ruin(double lambda, const SimLaw& claims_law,
                                  const std::vector<double>& u_grid, std::size_t n_paths,
                                  double horizon, RngStream& rng) {
    if (!(lambda > 0.0)) throw std::domain_error("simulate_ruin: lambda must be positive");
    if (n_paths < 1) throw std::domain_error("simulate_ruin: n_paths must be >= 1");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::domain_error("simulate_ruin: horizon must be finite and positive");

    std::vector<std::size_t> ruined(u_grid.size(), 0);
    for (std::size_t path = 0; path < n_paths; ++path) {
        RngStream prng = rng.split(path);
        double t = 0.0;
        double total_claims = 0.0;
        double max_deficit = 0.0;  // max over claim epochs of sum C_i - t
        for (;;) {
            t += prng.exponential(lambda);
            if (t > horizon) break;
            total_claims += draw_law(claims_law, prng);
            max_deficit = std::max(max_deficit, total_claims - t);
        }
        for (std::size_t i = 0; i < u_grid.size(); ++i)
            if (max_deficit > u_grid[i]) ++ruined[i];
    }

    std::vector<double> freq(u_grid.size());
    for (std::size_t i = 0; i < u_grid.size(); ++i)
        freq[i] = static_cast<double>(ruined[i]) / static_cast<double>(n_paths);
    return freq;
}

}  // namespace dpln
