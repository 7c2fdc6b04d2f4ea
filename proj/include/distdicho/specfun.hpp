#pragma once

// Special-function layer used by the distribution and estimator code.
// All functions are pure, reentrant and reject NaN inputs with
// std::domain_error. Iterative evaluations (incomplete gamma/beta) are
// capped at 1000 iterations with a 1e-15 convergence tolerance and throw
// std::runtime_error if the cap is hit.

namespace distdicho::specfun {

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Digamma psi(x) for x > 0.
double digamma(double x);

/// Trigamma psi'(x) for x > 0.
double trigamma(double x);

/// Regularized lower incomplete gamma P(shape, x), shape > 0, x >= 0.
/// Series for x < shape + 1, continued fraction otherwise.
double reg_gamma_lower(double shape, double x);

/// Regularized upper incomplete gamma Q(shape, x) = 1 - P(shape, x).
double reg_gamma_upper(double shape, double x);

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double reg_beta(double a, double b, double x);

/// Standard normal CDF via erfc.
double normal_cdf(double z);

/// Standard normal density.
double normal_pdf(double z);

/// ln of the standard normal CDF, stable far into the lower tail.
double log_normal_cdf(double z);

/// Standard normal quantile, p in (0, 1).
double normal_quantile(double p);

/// Owen's T function T(h, a).
double owens_t(double h, double a);

} // namespace distdicho::specfun
