#pragma once

// Special functions backing the posterior engines: regularized incomplete
// beta, its inverse, normal and Student-t CDFs/quantiles, binomial pmf.
// All functions are pure and thread-safe.

namespace twoit {

// log Gamma(x), x > 0. Thread-safe (does not touch signgam).
double log_gamma(double x);

// log B(a, b) = log Gamma(a) + log Gamma(b) - log Gamma(a+b).
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b) for 0 <= x <= 1, a > 0, b > 0.
// Continued fraction (Lentz) on the fast-converging side with a power-series
// fallback; absolute error <= 1e-12. Monotone non-decreasing in x.
// Throws ValidationError on domain violations, NumericalError if neither
// expansion converges within the iteration cap.
double reg_inc_beta(double x, double a, double b);

// Inverse of reg_inc_beta in x: returns x with I_x(a, b) = p to 1e-10.
// Bracketed bisection refined by Newton steps. 0 < p < 1.
double beta_quantile(double p, double a, double b);

// Standard normal CDF / quantile. normal_cdf(z) + normal_cdf(-z) = 1.
double normal_cdf(double z);
double normal_quantile(double p);

// Student-t CDF / quantile with nu > 0 degrees of freedom.
// cdf(t, nu) + cdf(-t, nu) = 1 exactly by construction.
double student_t_cdf(double t, double nu);
double student_t_quantile(double p, double nu);

// Binomial pmf P(X = k | n, p). Symmetric under (k, p) -> (n-k, 1-p).
double binomial_pmf(long k, long n, double p);

}  // namespace twoit
