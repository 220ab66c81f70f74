#pragma once

#include <variant>
#include <vector>

#include "dpln/params.hpp"
#include "dpln/rng.hpp"

namespace dpln {

// Interarrival / service / claim laws accepted by the simulator.
struct ExponentialLaw {
    double rate;
};
struct DeterministicLaw {
    double value;
};
using SimLaw = std::variant<ExponentialLaw, DplnParams, DeterministicLaw>;

double draw_law(const SimLaw& law, RngStream& rng);
double law_mean(const SimLaw& law);  // +inf when it does not exist

struct SimConfig {
    std::size_t n_customers = 100000;
    std::size_t warmup = 10000;  // default 10% of customers
    std::uint64_t seed = 0;
    SimLaw arrival_law = ExponentialLaw{1.0};
    SimLaw service_law = ExponentialLaw{2.0};

    void validate() const {
        if (warmup >= n_customers) throw std::domain_error("SimConfig: warmup must be < n_customers");
    }
};

struct SimResult {
    std::vector<double> waiting_times;            // post-warmup W_q per customer
    std::vector<std::size_t> pre_arrival_sizes;   // post-warmup system size seen by each arrival
    std::vector<std::size_t> pre_arrival_counts;  // histogram of the sizes above
    double utilization = 0.0;                     // busy fraction of simulated time
    double mean_wq = 0.0;
    double mean_wq_se = 0.0;                      // batch-means standard error (20 batches)
};

// FIFO single-server queue via the Lindley recursion
// W_{n+1} = max(0, W_n + S_n - A_{n+1}); the pre-arrival system size is the
// number of earlier customers still present at each arrival instant.
SimResult simulate(const SimConfig& cfg);

// Direct paths of the risk process R(t) = u + t - sum C_i (unit premium
// rate). Returns, per initial reserve u, the fraction of paths ruined
// before the horizon: a lower bound on psi(u) that tightens with horizon.
std::vector<double> simulate_ruin(double lambda, const SimLaw& claims_law,
                                  const std::vector<double>& u_grid, std::size_t n_paths,
                                  double horizon, RngStream& rng);

}  // namespace dpln
