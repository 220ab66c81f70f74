#include "dpln/tam.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "dpln/density.hpp"

namespace dpln {

double TamApprox::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) m += weights[i] * points[i];
    return m;
}

// t_a with sum_{i<=a} w_i <= 0.5 and sum_{i<=a+1} w_i > 0.5.
double TamApprox::median() const {
    double cum = 0.0;
    std::size_t a = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (cum + weights[i] > 0.5) break;
        cum += weights[i];
        a = i;
    }
    return points[a];
}

TamGrid TamGrid::standard() {
    TamGrid g;
    for (int i = 1; i <= 8; ++i) g.r_values.push_back(0.1 * i);
    for (int i = 0; i < 17; ++i) g.q_values.push_back(0.10 + 0.05 * i);
    return g;
}

std::vector<double> hybrid_probs(std::size_t n, double r, double q, double split_prob) {
    if (n < 3) throw std::domain_error("hybrid_probs: N must be >= 3");
    if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("hybrid_probs: r must be in [0,1]");
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("hybrid_probs: q must be in (0,1)");
    if (!(split_prob > 0.0 && split_prob < 1.0))
        throw std::domain_error("hybrid_probs: split_prob must be in (0,1)");

    std::vector<double> p;
    p.reserve(n);
    if (r >= 1.0) {  // pure U-TAM
        for (std::size_t i = 1; i <= n; ++i) p.push_back(static_cast<double>(i - 1) / static_cast<double>(n));
        return p;
    }
    if (r <= 0.0) {  // pure G-TAM, truncated at the double-precision floor
        for (std::size_t i = 1; i <= n; ++i) {
            const double tail = std::pow(q, static_cast<double>(i));
            const double pi = 1.0 - tail;
            if (tail < 1e-14 || (!p.empty() && pi <= p.back())) break;
            p.push_back(pi);
        }
        return p;
    }

    const auto n_body = static_cast<std::size_t>(std::ceil(r * static_cast<double>(n)));
    const std::size_t n_tail = n - n_body;
    // Uniform spacing on (0, split]; p_1 sits one spacing off zero so that
    // every point has a finite quantile.
    for (std::size_t i = 1; i <= n_body; ++i)
        p.push_back(split_prob * static_cast<double>(i) / static_cast<double>(n_body));
    // Geometric fill of (split, 1). Once 1-p reaches the double-precision
    // floor the remaining points would collide at 1, carrying weights below
    // 1e-14; the schedule stops there.
    for (std::size_t k = 1; k <= n_tail; ++k) {
        const double tail = (1.0 - split_prob) * std::pow(q, static_cast<double>(k));
        const double pk = 1.0 - tail;
        if (tail < 1e-14 || pk <= p.back()) break;
        p.push_back(pk);
    }

    for (std::size_t i = 1; i < p.size(); ++i)
        if (!(p[i] > p[i - 1])) throw std::domain_error("hybrid_probs: schedule not increasing");
    return p;
}

std::vector<double> tam_weights(const std::vector<double>& probs) {
    const std::size_t n = probs.size();
    if (n < 3) throw std::domain_error("tam_weights: need at least 3 probabilities");
    for (std::size_t i = 1; i < n; ++i)
        if (!(probs[i] > probs[i - 1])) throw std::domain_error("tam_weights: probabilities not increasing");

    std::vector<double> w(n);
    w[0] = 0.5 * (probs[0] + probs[1]);
    for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (probs[i + 1] - probs[i - 1]);
    w[n - 1] = 1.0 - 0.5 * (probs[n - 2] + probs[n - 1]);
    return w;
}

TamApprox build_tam_from_quantiles(const std::vector<double>& probs,
                                   const std::vector<double>& quantiles,
                                   double r, double q, double split_prob) {
    TamApprox tam;
    tam.points = quantiles;
    tam.weights = tam_weights(probs);
    tam.n = probs.size();
    tam.r = r;
    tam.q = q;
    tam.split_prob = split_prob;
    return tam;
}

namespace {

double split_probability(const DplnParams& p) {
    if (p.alpha > 1.0) return dpln_cdf(dpln_moment(1.0, p), p);
    return 0.5;  // median split when the mean is infinite
}

TamApprox build_at(const DplnParams& p, std::size_t n, double r, double q, double split) {
    const std::vector<double> probs = hybrid_probs(n, r, q, split);
    std::vector<double> quantiles(probs.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        // The previous quantile seeds the next solve; the schedule is increasing.
        quantiles[i] = dpln_quantile(probs[i], p, prev);
        prev = quantiles[i];
    }
    return build_tam_from_quantiles(probs, quantiles, r, q, split);
}

}  // namespace

TamApprox build_tam(const DplnParams& p, std::size_t n, double r, double q) {
    p.validate();
    return build_at(p, n, r, q, split_probability(p));
}

CalibrationResult calibrate(const DplnParams& p, std::size_t n, const TamGrid& grid) {
    p.validate();
    if (grid.r_values.empty() || grid.q_values.empty())
        throw std::invalid_argument("calibrate: empty grid");

    const double split = split_probability(p);
    const bool has_mean = p.alpha > 1.0;
    const double target_mean = has_mean ? dpln_moment(1.0, p) : 0.0;

    CalibrationResult best;
    best.objective = has_mean ? CalibrationObjective::mean : CalibrationObjective::median;
    bool first = true;
    for (double r : grid.r_values) {
        for (double q : grid.q_values) {
            TamApprox tam = build_at(p, n, r, q, split);
            double residual;
            if (has_mean) {
                residual = std::abs(tam.mean() - target_mean) / target_mean;
            } else {
                // Probability-scale distance of the TAM median from the true median.
                residual = std::abs(dpln_cdf(tam.median(), p) - 0.5);
            }
            const bool better =
                first || residual < best.residual ||
                (residual == best.residual && r > best.r_star);  // deterministic tie-break
            if (better) {
                best.r_star = r;
                best.q_star = q;
                best.residual = residual;
                best.tam = std::move(tam);
                first = false;
            }
        }
    }
    best.target_met = best.residual < 1e-3;
    return best;
}

double eval_transform(const TamApprox& tam, double s) {
    if (!(s >= 0.0)) throw std::domain_error("eval_transform: s must be >= 0");
    double acc = 0.0;
    for (std::size_t i = 0; i < tam.points.size(); ++i)
        acc += tam.weights[i] * std::exp(-s * tam.points[i]);
    return acc;
}

void save_tam(std::ostream& os, const TamApprox& tam) {
    os << "# tam N=" << tam.n << " r=" << tam.r << " q=" << tam.q
       << " split_prob=" << tam.split_prob << "\n# point weight\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < tam.points.size(); ++i)
        os << tam.points[i] << '\t' << tam.weights[i] << '\n';
}

}  // namespace dpln
