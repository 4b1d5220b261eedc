#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aelab/io.hpp"
#include "aelab/linalg.hpp"
#include "aelab/rng.hpp"

namespace aelab {

/// Precisions after iteration k, and the MSE read off γ_{1,k+1}.
struct VampState {
  std::size_t k = 0;
  double gamma1 = 0.0, tau1 = 0.0, gamma2 = 0.0, tau2 = 0.0;
  double mse = 1.0;
};

/// Spectrum of BᵀB for subsampled Haar rows: r·δ1 + (1 − r)·δ0.
struct SpectralLaw {
  double r = 1.0;
};

/// x¹ = Bᵀ·sign(Bx).
Vector rigamp_first_iterate(const EncoderMatrix& B, const Vector& x, SeedSpec seed);

struct QuadSpec {
  double rel_tol = 1e-12;
};

/// Minimum MSE of the sparse-Gaussian prior through R = X + N(0, 1/γ1),
/// written as γ1⁻¹∫E′(R) log p(R) dR.
double vamp_E1(double gamma1, double p, const QuadSpec& quad = {});
/// 1 − E[g(R)²] with g the posterior mean: the same quantity computed directly.
double vamp_mmse(double gamma1, double p, const QuadSpec& quad = {});

double vamp_E2(double tau2, double gamma2, double r);
double vamp_B2(double tau2, double gamma2);

struct B1Options {
  /// When set, b = 1 − 1/τ1 is raised to this floor instead of failing.
  double b_floor = 0.0;
  bool allow_clamp = false;
};

struct B1Estimate {
  double value = 0.0;
  double std_error = 0.0;
  double b = 0.0;
  bool clamped = false;
};

/// E[∂/∂P1 E[Z | P1, Y]] with Z ~ N(0,1), Y = sign(Z), P1 = bZ + aG; Monte-Carlo
/// over antithetic (G, −G) pairs.
B1Estimate vamp_B1(double tau1, std::size_t n_mc, SeedSpec seed, const B1Options& options = {});

/// Derivative of E[Z | P1, Y] at a point (the closed form averaged by vamp_B1).
double vamp_B1_integrand(double p1, double y, double tau1);
/// Conditional mean E[Z | P1 = p1, Y = y] with Var(Z | P1) = 1/τ1.
double vamp_conditional_mean(double p1, double y, double tau1);

struct VampOptions {
  std::size_t n_mc = 1'000'000;
  double b_floor = 1e-12;
  double tol = 1e-5;
};

struct VampResult {
  double mse = 1.0;
  std::vector<VampState> trace;
  bool converged = false;
  std::size_t clamp_events = 0;
};

VampResult vamp_se_run(double p, double r, std::size_t k_max = 15, double init = 1e-6, SeedSpec seed = {},
                       const VampOptions& options = {});

CsvTable vamp_trace_table(const VampResult& result);

}  // namespace aelab
