#pragma once

namespace a0c {

/// log Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 terms).
/// Absolute error below 1e-10 on [0.5, 100]. Throws std::domain_error for
/// x <= 0.
double log_gamma(double x);

/// Digamma psi(x) for x > 0: recurrence into x >= 10, then the asymptotic
/// Bernoulli series.
double digamma(double x);

/// Trigamma psi'(x) for x > 0, same scheme as digamma.
double trigamma(double x);

/// log Beta(a, b).
double log_beta(double a, double b);

}  // namespace a0c
