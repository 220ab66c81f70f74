#pragma once

#include "dpln/params.hpp"
#include "dpln/rng.hpp"

namespace dpln {

// ---- Normal Laplace (log scale) ----

// Density of Y = Z + W with Z ~ N(nu, tau2) and W skewed Laplace(alpha, beta):
//   f_Y(y) = alpha*beta/(alpha+beta) * phi(p) * [R(alpha*tau - p) + R(beta*tau + p)],
// p = (y - nu)/tau. Evaluated in the log domain throughout. (Mill's ratio
// absorbs the usual 1/tau scale factor; the form above integrates to one.)
double nl_log_pdf(double y, const DplnParams& p);
double nl_pdf(double y, const DplnParams& p);

// Closed-form cdf F_Y(y) = Phi(p) + phi(p) * [alpha R(beta*tau+p) - beta R(alpha*tau-p)] / (alpha+beta).
// The left half is routed through the mirrored survival function to avoid
// the cancellation the direct form suffers deep in the lower tail.
double nl_cdf(double y, const DplnParams& p);
double nl_sf(double y, const DplnParams& p);

// ---- double Pareto lognormal (raw scale), X = exp(Y) ----

double dpln_log_pdf(double x, const DplnParams& p);
double dpln_pdf(double x, const DplnParams& p);
double dpln_cdf(double x, const DplnParams& p);
double dpln_sf(double x, const DplnParams& p);

// Mixture components: f_X = beta/(alpha+beta) f1 + alpha/(alpha+beta) f2,
// the limiting lognormal-Pareto composites of the law.
double dpln_mixture_f1(double x, const DplnParams& p);
double dpln_mixture_f2(double x, const DplnParams& p);

// E(X^r) = alpha*beta / ((alpha-r)(beta+r)) * exp(r nu + r^2 tau2 / 2).
// Throws moment_error when r >= alpha.
double dpln_moment(double r, const DplnParams& p);

// i.i.d. draws of X = exp(N(nu,tau2) + Exp(alpha) - Exp(beta)).
SampleBatch sample_dpln(std::size_t n, const DplnParams& p, RngStream& rng);

// Quantile by safeguarded Newton on the log scale; |cdf(t) - prob| <= 1e-10.
// init, when given, seeds the iteration (raw scale); the default start is
// the lognormal(nu, tau2) quantile.
double dpln_quantile(double prob, const DplnParams& p, double init = 0.0);

}  // namespace dpln
