#pragma once

// Independent oracles for the test suite. These deliberately avoid the
// library's own evaluation paths: plain adaptive Simpson quadrature over
// densities, bisection for inverses, and an empirical KS distance.

#include <functional>
#include <vector>

namespace oracle {

// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

// Beta(a, b) CDF at x by quadrature of the density.
double beta_cdf(double x, double a, double b);

// Standard normal CDF by quadrature of the density from 0.
double normal_cdf(double z);

// Inverse of a monotone CDF on [lo, hi] by plain bisection.
double invert_by_bisection(const std::function<double(double)>& cdf, double p, double lo,
                           double hi, int steps = 200);

// Kolmogorov-Smirnov distance between a sample and a reference CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

}  // namespace oracle
