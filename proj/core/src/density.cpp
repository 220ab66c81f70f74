#include "dpln/density.hpp"

#include <algorithm>
#include <limits>

#include "dpln/special.hpp"

namespace dpln {

namespace {

// log Phi(z), stable for very negative z via Phi(z) = phi(z) R(-z).
double norm_log_cdf(double z) {
    if (z < -8.0) return norm_log_pdf(z) + log_mills_ratio(-z);
    return std::log(norm_cdf(z));
}

// Survival function of the standardized NL law at p = (y - nu)/tau >= 0:
//   S = phi(p) * [ R(p) + (beta R(alpha tau - p) - alpha R(beta tau + p)) / (alpha + beta) ].
// Each product is assembled in the log domain; the one subtraction is
// bounded (the positive part always dominates by a factor beta/(alpha+beta)).
double nl_sf_std(double p, double alpha, double beta, double tau) {
    const double lphi = norm_log_pdf(p);
    const double upper_tail = std::exp(lphi + log_mills_ratio(p));                 // Phi^c(p)
    const double t1 = std::exp(lphi + log_mills_ratio(alpha * tau - p));           // phi(p) R(alpha tau - p)
    const double t2 = std::exp(lphi + log_mills_ratio(beta * tau + p));            // phi(p) R(beta tau + p)
    const double s = (upper_tail - alpha / (alpha + beta) * t2) + beta / (alpha + beta) * t1;
    return std::clamp(s, 0.0, 1.0);
}

}  // namespace

double nl_log_pdf(double y, const DplnParams& p) {
    p.validate();
    if (!std::isfinite(y)) throw std::domain_error("nl_pdf: non-finite y");
    const double tau = p.tau();
    const double z = (y - p.nu) / tau;
    const double lr = log_sum_exp(log_mills_ratio(p.alpha * tau - z),
                                  log_mills_ratio(p.beta * tau + z));
    return std::log(p.alpha) + std::log(p.beta) - std::log(p.alpha + p.beta) +
           norm_log_pdf(z) + lr;
}

double nl_pdf(double y, const DplnParams& p) { return std::exp(nl_log_pdf(y, p)); }

double nl_sf(double y, const DplnParams& p) {
    p.validate();
    const double tau = p.tau();
    const double z = (y - p.nu) / tau;
    if (z >= 0.0) return nl_sf_std(z, p.alpha, p.beta, tau);
    // -Y ~ NL(beta, alpha, -nu, tau2); mirror into the stable half.
    return 1.0 - nl_sf_std(-z, p.beta, p.alpha, tau);
}

double nl_cdf(double y, const DplnParams& p) {
    p.validate();
    const double tau = p.tau();
    const double z = (y - p.nu) / tau;
    if (z <= 0.0) return nl_sf_std(-z, p.beta, p.alpha, tau);
    return 1.0 - nl_sf_std(z, p.alpha, p.beta, tau);
}

double dpln_log_pdf(double x, const DplnParams& p) {
    if (!(x > 0.0)) throw std::domain_error("dpln_pdf: x must be positive");
    const double lx = std::log(x);
    return nl_log_pdf(lx, p) - lx;
}

double dpln_pdf(double x, const DplnParams& p) { return std::exp(dpln_log_pdf(x, p)); }

double dpln_cdf(double x, const DplnParams& p) {
    if (!(x > 0.0)) throw std::domain_error("dpln_cdf: x must be positive");
    return nl_cdf(std::log(x), p);
}

double dpln_sf(double x, const DplnParams& p) {
    if (!(x > 0.0)) throw std::domain_error("dpln_sf: x must be positive");
    return nl_sf(std::log(x), p);
}

double dpln_mixture_f1(double x, const DplnParams& p) {
    p.validate();
    if (!(x > 0.0)) throw std::domain_error("dpln_mixture_f1: x must be positive");
    const double tau = p.tau();
    const double q = (std::log(x) - p.nu - p.alpha * p.tau2) / tau;
    const double lf = std::log(p.alpha) - (p.alpha + 1.0) * std::log(x) + p.alpha * p.nu +
                      0.5 * p.alpha * p.alpha * p.tau2 + norm_log_cdf(q);
    return std::exp(lf);
}

double dpln_mixture_f2(double x, const DplnParams& p) {
    p.validate();
    if (!(x > 0.0)) throw std::domain_error("dpln_mixture_f2: x must be positive");
    const double tau = p.tau();
    const double q = (std::log(x) - p.nu + p.beta * p.tau2) / tau;
    const double lf = std::log(p.beta) + (p.beta - 1.0) * std::log(x) - p.beta * p.nu +
                      0.5 * p.beta * p.beta * p.tau2 + norm_log_cdf(-q);
    return std::exp(lf);
}

double dpln_moment(double r, const DplnParams& p) {
    p.validate();
    if (!(r > 0.0)) throw std::domain_error("dpln_moment: order must be positive");
    if (r >= p.alpha)
        throw moment_error("dpln_moment: E(X^r) does not exist for r >= alpha");
    return p.alpha * p.beta / ((p.alpha - r) * (p.beta + r)) *
           std::exp(r * p.nu + 0.5 * r * r * p.tau2);
}

SampleBatch sample_dpln(std::size_t n, const DplnParams& p, RngStream& rng) {
    p.validate();
    if (n == 0) throw std::domain_error("sample_dpln: n must be >= 1");
    SampleBatch out;
    out.scale_tag = ScaleTag::raw;
    out.values.reserve(n);
    const double tau = p.tau();
    for (std::size_t i = 0; i < n; ++i) {
        const double y = rng.normal(p.nu, tau) + rng.exponential(p.alpha) - rng.exponential(p.beta);
        out.values.push_back(std::exp(y));
    }
    return out;
}

double dpln_quantile(double prob, const DplnParams& p, double init) {
    p.validate();
    if (!(prob > 0.0 && prob < 1.0)) throw std::domain_error("dpln_quantile: prob must be in (0,1)");

    const double tau = p.tau();
    // Work on the log scale; heavy tails are linear there.
    double y = (init > 0.0) ? std::log(init) : p.nu + tau * norm_ppf(prob);

    // Expand to a bracket [lo, hi] with F(lo) < prob < F(hi).
    double lo = y, hi = y;
    double f_y = nl_cdf(y, p);
    double step = std::max(tau, 0.5);
    if (f_y < prob) {
        while (nl_cdf(hi, p) < prob) {
            lo = hi;
            hi += step;
            step *= 2.0;
            if (step > 1e6) throw convergence_error("dpln_quantile: bracket expansion failed",
                                                    std::exp(lo), std::exp(hi));
        }
    } else {
        while (nl_cdf(lo, p) > prob) {
            hi = lo;
            lo -= step;
            step *= 2.0;
            if (step > 1e6) throw convergence_error("dpln_quantile: bracket expansion failed",
                                                    std::exp(lo), std::exp(hi));
        }
    }

    y = 0.5 * (lo + hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double err = nl_cdf(y, p) - prob;
        if (std::abs(err) <= 1e-12) return std::exp(y);
        if (err > 0.0)
            hi = y;
        else
            lo = y;
        const double density = nl_pdf(y, p);
        double next = y - err / density;
        // Bisection fallback when Newton leaves the bracket or stalls.
        if (!(density > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        y = next;
    }
    if (std::abs(nl_cdf(y, p) - prob) <= 1e-10) return std::exp(y);
    throw convergence_error("dpln_quantile: Newton did not converge", std::exp(lo), std::exp(hi));
}

}  // namespace dpln
