#pragma once

#include <iosfwd>
#include <vector>

#include "dpln/params.hpp"

namespace dpln {

// Discrete support/weight approximation of a Laplace transform:
// f*_N(s) = sum_i w_i exp(-s t_i) with t_i the quantiles of order p_i.
struct TamApprox {
    std::vector<double> points;   // strictly increasing, positive
    std::vector<double> weights;  // positive, sum to 1
    std::size_t n = 0;
    double r = 0.0;               // uniform proportion used
    double q = 0.0;               // geometric rate used
    double split_prob = 0.0;      // P(X <= E[X]) or 0.5 when the mean is infinite

    double mean() const;    // sum w_i t_i
    double median() const;  // t_a with cumulative weight straddling 0.5
};

enum class CalibrationObjective { mean, median };

struct TamGrid {
    std::vector<double> r_values;
    std::vector<double> q_values;

    // Default 8 x 17 grid: r in {0.1..0.8} step 0.1, q in {0.10..0.90} step 0.05.
    static TamGrid standard();
};

struct CalibrationResult {
    double r_star = 0.0;
    double q_star = 0.0;
    double residual = 0.0;  // relative |TAM mean - E X| / E X, or |F(tam median) - 0.5|
    bool target_met = false;  // residual < 1e-3
    CalibrationObjective objective = CalibrationObjective::mean;
    TamApprox tam;
};

// Hybrid probability schedule: ceil(r*N) uniformly spaced points on
// (0, split_prob], the rest of geometric form 1 - (1-split_prob) q^k
// filling (split_prob, 1). The limiting conventions r = 1 (pure U-TAM,
// p_i = (i-1)/N) and r = 0 (pure G-TAM, p_i = 1 - q^i) are honored.
std::vector<double> hybrid_probs(std::size_t n, double r, double q, double split_prob);

// Trapezoid-style weights: w_1 = (p_1+p_2)/2, w_i = (p_{i+1}-p_{i-1})/2,
// w_N = 1 - (p_{N-1}+p_N)/2; sums to 1 by telescoping.
std::vector<double> tam_weights(const std::vector<double>& probs);

TamApprox build_tam(const DplnParams& p, std::size_t n, double r, double q);

// Exhaustive (r,q) grid search minimizing the mean criterion when E[X]
// exists (alpha > 1) or the median criterion otherwise. Failure to reach
// the 1e-3 target is reported via target_met, never thrown.
CalibrationResult calibrate(const DplnParams& p, std::size_t n, const TamGrid& grid);

// f*_N(s); s must be >= 0.
double eval_transform(const TamApprox& tam, double s);

// Diagnostic two-column (point, weight) dump.
void save_tam(std::ostream& os, const TamApprox& tam);

// Generic construction from an arbitrary quantile function; used by the
// calibration machinery and by tests that feed non-dPlN laws through the
// same pipeline.
TamApprox build_tam_from_quantiles(const std::vector<double>& probs,
                                   const std::vector<double>& quantiles,
                                   double r, double q, double split_prob);

}  // namespace dpln
