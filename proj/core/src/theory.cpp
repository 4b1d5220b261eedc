#include "aelab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aelab/denoisers.hpp"
#include "aelab/error.hpp"
#include "aelab/parallel.hpp"
#include "aelab/quadrature.hpp"

namespace aelab {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

void check_r(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("compression rate r outside [0,1]");
}

template <typename F>
std::optional<double> bisect(const F& g, double lo, double hi, double tol) {
  double glo = g(lo), ghi = g(hi);
  if (!(glo * ghi < 0.0)) return std::nullopt;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

constexpr double kBracketLo = 1e-4;
constexpr double kBracketHi = 1.0 - 1e-9;

}  // namespace

StateEvolutionParams state_evolution_params(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("state_evolution_params: r outside (0,1]");
  return {r * std::sqrt(kTwoOverPi), r * (1.0 - r * kTwoOverPi)};
}

double gaussian_mse(double r) {
  check_r(r);
  return 1.0 - kTwoOverPi * r;
}

double identity_mse(const Prior& prior, double r) {
  check_r(r);
  const double m = mean_abs(prior);
  return 1.0 - r * m * m;
}

double haar_denoised_mse(const Prior& prior, const std::function<double(double)>& f, double r) {
  const StateEvolutionParams se = state_evolution_params(r);
  const double sigma = std::sqrt(se.sigma2);
  const auto& gh = gauss_hermite(200);
  auto h = [&](double x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      const double e = x - f(se.mu * x + sigma * gh.nodes[i]);
      acc += gh.weights[i] * e * e;
    }
    return acc;
  };

  double total = 0.0;
  if (!prior.analytic()) {
    const auto& xs = prior.samples();
    const std::size_t stride = std::max<std::size_t>(1, xs.size() / 20000);
    std::size_t count = 0;
    for (std::size_t i = 0; i < xs.size(); i += stride, ++count) total += h(xs[i]);
    total /= static_cast<double>(count);
  } else {
    const DensityParts parts = density_parts(prior);
    if (parts.atom_weight > 0) total += parts.atom_weight * h(0.0);
    for (const auto& [x, w] : parts.discrete) total += w * h(x);
    if (parts.slab) {
      total += integrate([&](double x) { return parts.slab(x) * h(x); }, -parts.slab_halfwidth,
                         parts.slab_halfwidth, parts.slab_breakpoints, 1e-10);
    }
  }
  if (!std::isfinite(total)) throw NumericalError("haar_denoised_mse: non-finite value (f not finite?)");
  return total;
}

double optimal_denoised_mse(const Prior& prior, double r) {
  return haar_denoised_mse(prior, optimal_denoiser(prior, state_evolution_params(r)), r);
}

std::optional<double> critical_sparsity_linear(PriorKind family, double tol) {
  if (family == PriorKind::Empirical) throw UnsupportedError("critical_sparsity_linear: needs an analytic family");
  const double target = std::sqrt(kTwoOverPi);
  return bisect([&](double p) { return mean_abs(Prior(family, p)) - target; }, kBracketLo, kBracketHi, tol);
}

std::optional<double> critical_sparsity_denoised(PriorKind family, double r, double tol) {
  if (family == PriorKind::Empirical) throw UnsupportedError("critical_sparsity_denoised: needs an analytic family");
  auto g = [&](double p) {
    const Prior prior(family, p);
    const double gap = optimal_denoised_mse(prior, r) - identity_mse(prior, r);
    // Curves that only touch within quadrature accuracy do not cross.
    return std::abs(gap) < 1e-8 ? 0.0 : gap;
  };
  return bisect(g, kBracketLo, kBracketHi, tol);
}

MseCurve theory_curve(const std::string& name, const Prior& prior, const std::vector<double>& grid, CurveAxis axis,
                      double fixed) {
  MseCurve curve{grid, std::vector<double>(grid.size()), name};
  parallel_for(grid.size(), [&](std::size_t i) {
    const Prior pr = axis == CurveAxis::P ? prior.with_p(grid[i]) : prior;
    const double r = axis == CurveAxis::R ? grid[i] : fixed;
    double v;
    if (name == "gaussian") {
      v = gaussian_mse(r);
    } else if (name == "identity") {
      v = identity_mse(pr, r);
    } else if (name == "optimal_denoised") {
      v = r == 0.0 ? second_moment(pr) : optimal_denoised_mse(pr, r);
    } else {
      throw UsageError("unknown theory curve '" + name + "' (gaussian, identity, optimal_denoised)");
    }
    curve.values[i] = v;
  });
  return curve;
}

CsvTable curve_table(const std::vector<MseCurve>& curves) {
  CsvTable table{{"grid_value", "mse", "label"}, {}};
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.grid.size(); ++i) table.add({c.grid[i], c.values[i], c.label});
  return table;
}

}  // namespace aelab
