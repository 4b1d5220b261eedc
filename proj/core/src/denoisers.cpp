#include "aelab/denoisers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "aelab/error.hpp"
#include "aelab/quadrature.hpp"

namespace aelab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_channel(const StateEvolutionParams& se, double p) {
  if (!(se.sigma2 > 0.0)) throw DomainError("denoiser: sigma2 must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("denoiser: p outside (0,1]");
}

double safe_log(double v) { return v > 0.0 ? std::log(v) : kNegInf; }

}  // namespace

double fstar_sparse_gaussian(double y, const StateEvolutionParams& se, double p) {
  check_channel(se, p);
  const double mu = se.mu, s2 = se.sigma2;
  const double v = mu * mu / p + s2;  // variance of y given the slab
  const double slope = mu / (p * v);
  if (p == 1.0) return slope * y;
  // odds of the atom against the slab at y
  const double log_odds = std::log((1.0 - p) / p) + 0.5 * std::log(v / s2) - y * y / (2.0 * s2) + y * y / (2.0 * v);
  const double slab_post = log_odds > 0 ? std::exp(-log_odds) / (1.0 + std::exp(-log_odds))
                                        : 1.0 / (1.0 + std::exp(log_odds));
  return slope * y * slab_post;
}

double fstar_sparse_rademacher(double y, const StateEvolutionParams& se, double p) {
  check_channel(se, p);
  const double a = 1.0 / std::sqrt(p);
  const double s2 = se.sigma2;
  const double ep = -(y - se.mu * a) * (y - se.mu * a) / (2.0 * s2);
  const double em = -(y + se.mu * a) * (y + se.mu * a) / (2.0 * s2);
  const double e0 = p < 1.0 ? std::log(1.0 - p) - y * y / (2.0 * s2) : kNegInf;
  const double half = std::log(p / 2.0);
  const double top = std::max({ep + half, em + half, e0});
  const double wp = std::exp(ep + half - top), wm = std::exp(em + half - top), w0 = std::exp(e0 - top);
  return a * (wp - wm) / (w0 + wp + wm);
}

double fstar_sparse_laplace(double y, const StateEvolutionParams& se, double p) {
  check_channel(se, p);
  if (y == 0.0) return 0.0;
  const double sign = y < 0 ? -1.0 : 1.0;
  y = std::abs(y);
  const double mu = se.mu, s2 = se.sigma2, s = std::sqrt(s2);
  const double rate = std::sqrt(2.0 * p);
  const double kappa = rate / mu;
  const double tp = (y - kappa * s2) / s, tm = (-y - kappa * s2) / s;
  const double common = std::log(p * rate / 2.0) + kappa * kappa * s2 / 2.0;

  const double log_slab = common - std::log(mu) +
                          log_add_exp(-kappa * y + log_normal_cdf(tp), kappa * y + log_normal_cdf(tm));
  const double log_atom =
      p < 1.0 ? std::log(1.0 - p) - y * y / (2.0 * s2) - 0.5 * std::log(2.0 * std::numbers::pi * s2) : kNegInf;
  const double log_den = log_add_exp(log_slab, log_atom);

  const double lp = -kappa * y + log_partial_moment(tp);
  const double lm = kappa * y + log_partial_moment(tm);
  if (!(lm < lp)) return 0.0;
  const double log_num = common + std::log(s) - 2.0 * std::log(mu) + lp + std::log1p(-std::exp(lm - lp));
  return sign * std::exp(log_num - log_den);
}

PosteriorMean posterior_mean_numeric(const Prior& prior, const StateEvolutionParams& se, double y) {
  if (!(se.sigma2 > 0.0)) throw DomainError("posterior_mean_numeric: sigma2 must be positive");
  const double mu = se.mu, s2 = se.sigma2;
  auto loglik = [&](double x) { return -(y - mu * x) * (y - mu * x) / (2.0 * s2); };

  if (!prior.analytic()) {
    const auto& xs = prior.samples();
    double top = kNegInf;
    for (double x : xs) top = std::max(top, loglik(x));
    double sw = 0.0, swx = 0.0;
    for (double x : xs) {
      const double w = std::exp(loglik(x) - top);
      sw += w;
      swx += w * x;
    }
    const double mean = swx / sw;
    double var = 0.0;
    for (double x : xs) {
      const double w = std::exp(loglik(x) - top);
      var += w * w * (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(var) / sw, xs.size() < 100};
  }

  const DensityParts parts = density_parts(prior);
  double half = parts.slab_halfwidth;
  std::vector<double> breaks = parts.slab_breakpoints;
  if (mu > 0.0) {
    half = std::max(half, std::abs(y) / mu + 12.0 * std::sqrt(s2) / mu);
    breaks.push_back(y / mu);
  }

  // Common scale so the largest contribution is O(1).
  double top = parts.atom_weight > 0 ? std::log(parts.atom_weight) + loglik(0.0) : kNegInf;
  for (const auto& [x, w] : parts.discrete) top = std::max(top, std::log(w) + loglik(x));
  if (parts.slab) {
    auto probe = [&](double x) { top = std::max(top, safe_log(parts.slab(x)) + loglik(x)); };
    for (int i = 0; i <= 2000; ++i) probe(-half + 2.0 * half * i / 2000.0);
    if (mu > 0.0 && std::abs(y / mu) <= half) probe(y / mu);
  }

  double den = 0.0, num = 0.0;
  if (parts.atom_weight > 0) den += std::exp(std::log(parts.atom_weight) + loglik(0.0) - top);
  for (const auto& [x, w] : parts.discrete) {
    const double e = std::exp(std::log(w) + loglik(x) - top);
    den += e;
    num += x * e;
  }
  if (parts.slab) {
    auto dens = [&](double x) {
      const double s = parts.slab(x);
      return s > 0 ? std::exp(std::log(s) + loglik(x) - top) : 0.0;
    };
    den += integrate(dens, -half, half, breaks, 1e-13);
    num += integrate([&](double x) { return x * dens(x); }, -half, half, breaks, 1e-13);
  }
  if (!(den > 0.0)) throw NumericalError("posterior_mean_numeric: vanishing evidence");
  return {num / den, 0.0, false};
}

std::function<double(double)> make_denoiser(const DenoiserSpec& spec) {
  const Prior prior = spec.prior;
  const StateEvolutionParams se = spec.se;
  switch (spec.form) {
    case DenoiserForm::ClosedForm:
      switch (prior.kind()) {
        case PriorKind::SparseGaussian:
          return [se, p = prior.p()](double y) { return fstar_sparse_gaussian(y, se, p); };
        case PriorKind::SparseRademacher:
          return [se, p = prior.p()](double y) { return fstar_sparse_rademacher(y, se, p); };
        case PriorKind::SparseLaplace:
          return [se, p = prior.p()](double y) { return fstar_sparse_laplace(y, se, p); };
        default:
          throw UnsupportedError("no closed-form denoiser for " + prior.to_string());
      }
    case DenoiserForm::Quadrature:
    case DenoiserForm::MonteCarlo:
      return [prior, se](double y) { return posterior_mean_numeric(prior, se, y).value; };
  }
  throw UnsupportedError("unknown denoiser form");
}

std::function<double(double)> optimal_denoiser(const Prior& prior, const StateEvolutionParams& se) {
  switch (prior.kind()) {
    case PriorKind::SparseGaussian:
    case PriorKind::SparseRademacher:
    case PriorKind::SparseLaplace:
      return make_denoiser({prior, se, DenoiserForm::ClosedForm});
    case PriorKind::SparseGaussianMixture:
      return make_denoiser({prior, se, DenoiserForm::Quadrature});
    case PriorKind::Empirical: {
      // Tabulate once: the sample-ratio rule costs O(#samples) per call.
      double xmax = 0.0;
      for (double x : prior.samples()) xmax = std::max(xmax, std::abs(x));
      const double ymax = se.mu * xmax + 10.0 * std::sqrt(se.sigma2);
      constexpr int kPoints = 4001;
      auto table = std::make_shared<std::vector<double>>(kPoints);
      for (int i = 0; i < kPoints; ++i)
        (*table)[i] = posterior_mean_numeric(prior, se, -ymax + 2.0 * ymax * i / (kPoints - 1)).value;
      return [table, ymax, prior, se](double y) {
        if (std::abs(y) >= ymax) return posterior_mean_numeric(prior, se, y).value;
        const double pos = (y + ymax) / (2.0 * ymax) * (kPoints - 1);
        const auto i = std::min(static_cast<std::size_t>(pos), static_cast<std::size_t>(kPoints - 2));
        const double t = pos - static_cast<double>(i);
        return (1.0 - t) * (*table)[i] + t * (*table)[i + 1];
      };
    }
  }
  throw UnsupportedError("optimal_denoiser: unknown prior");
}

double max_slope(const std::function<double(double)>& f, double lo, double hi, std::size_t points) {
  double best = 0.0;
  double prev = f(lo);
  const double h = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 1; i < points; ++i) {
    const double cur = f(lo + h * static_cast<double>(i));
    best = std::max(best, std::abs(cur - prev) / h);
    prev = cur;
  }
  return best;
}

CsvTable denoiser_table(const std::function<double(double)>& f, double lo, double hi, std::size_t points) {
  if (points < 2) throw DomainError("denoiser_table: need at least two points");
  CsvTable table{{"y", "fstar"}, {}};
  for (std::size_t i = 0; i < points; ++i) {
    const double y = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    table.add({y, f(y)});
  }
  return table;
}

}  // namespace aelab
