#include "aelab/amp.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "aelab/error.hpp"
#include "aelab/models.hpp"
#include "aelab/parallel.hpp"
#include "aelab/quadrature.hpp"

namespace aelab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_precision(double gamma1, double p) {
  if (!(gamma1 > 0.0) || !std::isfinite(gamma1)) throw DomainError("vamp: gamma1 must be positive and finite");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("vamp: p outside (0,1]");
}

// Pieces of the sparse-Gaussian channel R = X + N(0, 1/γ1).
struct Channel {
  double gamma1, p, q;  // q = p/γ1 + 1

  Channel(double g, double pp) : gamma1(g), p(pp), q(pp / g + 1.0) {}

  double slab_exponent(double r) const { return -p * r * r / (2.0 * q); }

  // log of E(R)/R = p·√(p/2π)·q^{−3/2}·exp(…)
  double log_e_over_r(double r) const {
    return std::log(p) + 0.5 * std::log(p / (2.0 * std::numbers::pi)) - 1.5 * std::log(q) + slab_exponent(r);
  }

  double log_density(double r) const {
    const double slab = std::log(p) - 0.5 * std::log(2.0 * std::numbers::pi * (1.0 / p + 1.0 / gamma1)) +
                        slab_exponent(r);
    const double atom = p < 1.0 ? std::log(1.0 - p) - 0.5 * std::log(2.0 * std::numbers::pi / gamma1) -
                                      r * r * gamma1 / 2.0
                                : kNegInf;
    return log_add_exp(slab, atom);
  }

  double e_prime(double r) const { return std::exp(log_e_over_r(r)) * (1.0 - p * r * r / q); }

  double halfwidth() const { return 12.0 * std::max(1.0 / std::sqrt(gamma1), 1.0 / std::sqrt(p)); }

  std::vector<double> breakpoints() const {
    const double w = 8.0 / std::sqrt(gamma1);
    const double s = std::sqrt(q / p);  // scale of the slab factor in E′
    return {-w, 0.0, w, -1.0 / std::sqrt(p), 1.0 / std::sqrt(p), -s, s, -2.0 * s, 2.0 * s, -4.0 * s, 4.0 * s};
  }
};

}  // namespace

Vector rigamp_first_iterate(const EncoderMatrix& B, const Vector& x, SeedSpec seed) {
  return B.matrix().transpose() * encode(B, x, seed);
}

double vamp_E1(double gamma1, double p, const QuadSpec& quad) {
  check_precision(gamma1, p);
  const Channel ch(gamma1, p);
  const double log_p0 = ch.log_density(0.0);
  const double L = ch.halfwidth();
  // ∫E′ = 0, so shifting log p by a constant only removes cancellation.
  const double integral =
      integrate([&](double r) { return ch.e_prime(r) * (ch.log_density(r) - log_p0); }, -L, L, ch.breakpoints(),
                quad.rel_tol);
  const double e1 = integral / gamma1;
  if (!std::isfinite(e1)) throw NumericalError("vamp_E1: non-finite integral at gamma1=" + std::to_string(gamma1));
  return e1;
}

double vamp_mmse(double gamma1, double p, const QuadSpec& quad) {
  check_precision(gamma1, p);
  const Channel ch(gamma1, p);
  const double L = ch.halfwidth();
  const double second = integrate(
      [&](double r) {
        if (r == 0.0) return 0.0;
        return std::exp(2.0 * (ch.log_e_over_r(r) + std::log(std::abs(r))) - ch.log_density(r));
      },
      -L, L, ch.breakpoints(), quad.rel_tol);
  return 1.0 - second;
}

double vamp_E2(double tau2, double gamma2, double r) { return r / (tau2 + gamma2) + (1.0 - r) / gamma2; }

double vamp_B2(double tau2, double gamma2) { return tau2 / (tau2 + gamma2); }

double vamp_conditional_mean(double p1, double y, double tau1) {
  const double s = 1.0 / std::sqrt(tau1);
  const double u = y * p1 / s;
  return p1 + y * s * inverse_mills(u);
}

double vamp_B1_integrand(double p1, double y, double tau1) {
  const double u = y * p1 * std::sqrt(tau1);
  const double lam = inverse_mills(u);
  return 1.0 - lam * (u + lam);
}

B1Estimate vamp_B1(double tau1, std::size_t n_mc, SeedSpec seed, const B1Options& options) {
  if (!(tau1 > 0.0) || !std::isfinite(tau1)) throw DomainError("vamp_B1: tau1 must be positive and finite");
  if (n_mc < 2) throw DomainError("vamp_B1: need at least two samples");
  B1Estimate est;
  est.b = 1.0 - 1.0 / tau1;
  if (est.b < 0.0 && !options.allow_clamp) {
    std::ostringstream msg;
    msg << "vamp_B1: b(1-b) < 0 at tau1=" << tau1;
    throw DomainError(msg.str());
  }
  // Only a negative b is a genuine clamp; lifting 0 ≤ b < floor is a no-op in value.
  est.clamped = est.b < 0.0;
  if (options.allow_clamp) est.b = std::max(est.b, options.b_floor);
  const double b = est.b;
  const double a = std::sqrt(b * (1.0 - b));
  const double tau_eff = 1.0 / (1.0 - b);

  const std::size_t pairs = (n_mc + 1) / 2;
  constexpr std::size_t kChunk = 1 << 14;
  const std::size_t chunks = (pairs + kChunk - 1) / kChunk;
  std::vector<std::array<double, 2>> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    Rng rng(derive(seed, c));
    const std::size_t count = std::min(kChunk, pairs - c * kChunk);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double z = rng.normal(), g = rng.normal();
      const double y = z >= 0 ? 1.0 : -1.0;
      const double v = 0.5 * (vamp_B1_integrand(b * z + a * g, y, tau_eff) +
                              vamp_B1_integrand(b * z - a * g, y, tau_eff));
      s += v;
      s2 += v * v;
    }
    partial[c] = {s, s2};
  });
  double s = 0.0, s2 = 0.0;
  for (const auto& v : partial) {
    s += v[0];
    s2 += v[1];
  }
  const double n = static_cast<double>(pairs);
  est.value = s / n;
  est.std_error = std::sqrt(std::max(0.0, (s2 / n - est.value * est.value) / std::max(1.0, n - 1.0)));
  return est;
}

VampResult vamp_se_run(double p, double r, std::size_t k_max, double init, SeedSpec seed,
                       const VampOptions& options) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("vamp_se_run: p outside (0,1]");
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("vamp_se_run: r outside (0,1]");
  if (!(init > 0.0)) throw DomainError("vamp_se_run: init must be positive");
  if (k_max < 1) throw DomainError("vamp_se_run: k_max must be at least 1");

  VampResult result;
  double gamma1 = init, tau1 = init;
  B1Options b1opt{options.b_floor, true};
  for (std::size_t k = 0; k < k_max; ++k) {
    VampState st;
    st.k = k;
    st.gamma1 = gamma1;
    st.tau1 = tau1;
    // E1 is the MMSE; the divergence entering the extrinsic update is γ1·E1.
    const double e1 = vamp_E1(gamma1, p);
    st.gamma2 = 1.0 / e1 - gamma1;
    // Same seed every iteration: the recursion stays a deterministic map.
    const B1Estimate b1 = vamp_B1(tau1, options.n_mc, seed, b1opt);
    if (b1.clamped) ++result.clamp_events;
    st.tau2 = tau1 * (1.0 - b1.value) / b1.value;
    gamma1 = st.gamma2 * r * st.tau2 / ((1.0 - r) * st.tau2 + st.gamma2);
    tau1 = st.gamma2;
    st.mse = vamp_mmse(gamma1, p);
    result.trace.push_back(st);
    if (!(st.gamma2 > 0.0 && st.tau2 > 0.0 && gamma1 > 0.0 && std::isfinite(gamma1) && std::isfinite(st.tau2))) {
      std::ostringstream msg;
      msg << "vamp_se_run: non-positive precision at k=" << k << " (gamma2=" << st.gamma2 << ", tau2=" << st.tau2
          << ")";
      throw NumericalError(msg.str());
    }
  }
  result.mse = result.trace.back().mse;
  result.converged =
      result.trace.size() >= 2 && std::abs(result.trace.back().mse - result.trace[result.trace.size() - 2].mse) <= options.tol;
  return result;
}

CsvTable vamp_trace_table(const VampResult& result) {
  CsvTable table{{"k", "gamma1", "tau1", "gamma2", "tau2", "mse"}, {}};
  for (const auto& st : result.trace)
    table.add({static_cast<long long>(st.k), st.gamma1, st.tau1, st.gamma2, st.tau2, st.mse});
  return table;
}

}  // namespace aelab
