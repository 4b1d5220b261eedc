#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace aelab {

/// Nodes and weights for E[h(g)], g ~ N(0,1): sum_i w_i h(x_i).
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached per order; order 200 is the default used by the theory module.
const GaussHermiteRule& gauss_hermite(std::size_t order = 200);

/// E[h(g)] for g ~ N(0,1).
double gaussian_expectation(const std::function<double(double)>& h, std::size_t order = 200);

/// Adaptive Gauss–Kronrod over [a, b], split at the given interior breakpoints.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> breakpoints = {}, double rel_tol = 1e-12);

double normal_pdf(double x);
double normal_cdf(double x);
/// log Φ(x), accurate far into the lower tail.
double log_normal_cdf(double x);
/// exp(x²)·erfc(x).
double erfcx(double x);
/// φ(u)/Φ(u).
double inverse_mills(double u);
/// t·Φ(t) + φ(t), the first partial moment of a standard normal, as a log.
double log_partial_moment(double t);

double log_add_exp(double a, double b);

}  // namespace aelab
