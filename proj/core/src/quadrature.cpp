#include "aelab/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "aelab/error.hpp"

namespace aelab {

namespace {

// Golub–Welsch eigenvalues of the Jacobi matrix as starting points, polished by
// Newton steps on the orthonormal Hermite recurrence (weight exp(-z^2)); the
// weights come from the recurrence derivative, which keeps tiny tail weights
// accurate in relative terms.
GaussHermiteRule build_gauss_hermite(std::size_t n) {
  const double pim4 = 0.7511255444649425;  // π^{-1/4}
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 1.0;
    return rule;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
  for (std::size_t k = 1; k < n; ++k) sub[k - 1] = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  for (std::size_t i = 0; i < n; ++i) {
    double z = eig.eigenvalues()[static_cast<Eigen::Index>(i)];
    double pp = 0.0;
    for (int it = 0; it < 8; ++it) {
      double p1 = pim4, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double step = p1 / pp;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    rule.nodes[i] = std::numbers::sqrt2 * z;
    rule.weights[i] = 2.0 / (pp * pp) / std::sqrt(std::numbers::pi);
  }
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(std::size_t order) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussHermiteRule>> cache;
  if (order < 1) throw DomainError("gauss_hermite: order must be positive");
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussHermiteRule>(build_gauss_hermite(order));
  return *slot;
}

double gaussian_expectation(const std::function<double(double)>& h, std::size_t order) {
  const auto& rule = gauss_hermite(order);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * h(rule.nodes[i]);
  return acc;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> breakpoints, double rel_tol) {
  if (!(b > a)) return 0.0;
  breakpoints.push_back(a);
  breakpoints.push_back(b);
  std::sort(breakpoints.begin(), breakpoints.end());
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  // A coarse pass measures each piece's L1 mass so that pieces carrying a
  // negligible share of the total are not refined to their own relative tolerance.
  std::vector<std::pair<double, double>> pieces;
  std::vector<double> mass;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double lo = std::max(a, breakpoints[i]);
    const double hi = std::min(b, breakpoints[i + 1]);
    if (!(hi > lo)) continue;
    double err = 0.0, l1 = 0.0;
    GK::integrate(f, lo, hi, 3, 1.0, &err, &l1);
    pieces.emplace_back(lo, hi);
    mass.push_back(l1);
  }
  double total_mass = 0.0;
  for (double m : mass) total_mass += m;
  double total = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (mass[i] == 0.0) continue;
    const double tol = std::min(1e-3, rel_tol * total_mass / mass[i]);
    double err = 0.0;
    const double v = GK::integrate(f, pieces[i].first, pieces[i].second, 20, tol, &err);
    if (!std::isfinite(v)) throw NumericalError("integrate: non-finite integral");
    total += v;
  }
  return total;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double erfcx(double x) {
  if (x < 0.0) {
    if (x < -26.0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::exp(x * x) - erfcx(-x);
  }
  if (x < 12.0) return std::exp(x * x) * std::erfc(x);
  // Asymptotic series; at x ≥ 12 the terms shrink well past double precision.
  const double inv2 = 1.0 / (2.0 * x * x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    term *= -(2.0 * k - 1.0) * inv2;
    sum += term;
  }
  return sum / (x * std::sqrt(std::numbers::pi));
}

double log_normal_cdf(double x) {
  if (x > -5.0) return std::log(normal_cdf(x));
  return std::log(0.5 * erfcx(-x / std::numbers::sqrt2)) - 0.5 * x * x;
}

double inverse_mills(double u) {
  const double e = erfcx(-u / std::numbers::sqrt2);
  if (!std::isfinite(e)) return 0.0;
  return std::sqrt(2.0 / std::numbers::pi) / e;
}

double log_partial_moment(double t) {
  const double log_phi = -0.5 * t * t - 0.5 * std::log(2.0 * std::numbers::pi);
  if (t >= 0.0) return std::log(t * normal_cdf(t) + normal_pdf(t));
  const double s = -t;
  double factor;  // 1 − s·Φ(−s)/φ(s)
  if (s < 20.0) {
    factor = 1.0 - s * std::sqrt(std::numbers::pi / 2.0) * erfcx(s / std::numbers::sqrt2);
  } else {
    const double inv = 1.0 / (s * s);
    double term = inv, sum = 0.0;
    for (int k = 1; k <= 10; ++k) {
      sum += term;
      term *= -(2.0 * k + 1.0) * inv;
    }
    factor = sum;
  }
  return log_phi + std::log(factor);
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace aelab
