#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aelab/io.hpp"
#include "aelab/priors.hpp"
#include "aelab/se_params.hpp"

namespace aelab {

/// 1 − (2/π)·r.
double gaussian_mse(double r);
/// 1 − r·(E|x|)².
double identity_mse(const Prior& prior, double r);

/// E|x − f(μx + σg)|² under the prior, with (μ, σ²) from state_evolution_params(r).
double haar_denoised_mse(const Prior& prior, const std::function<double(double)>& f, double r);
double optimal_denoised_mse(const Prior& prior, double r);

/// Keep probability where E|x| crosses √(2/π); none when the family never crosses.
std::optional<double> critical_sparsity_linear(PriorKind family, double tol = 1e-6);
/// Keep probability where the Bayes-denoised Haar curve meets the identity curve.
std::optional<double> critical_sparsity_denoised(PriorKind family, double r, double tol = 1e-6);

struct MseCurve {
  std::vector<double> grid;
  std::vector<double> values;
  std::string label;
};

enum class CurveAxis { R, P };

/// Named curves: "gaussian", "identity", "optimal_denoised". Along CurveAxis::P the
/// prior's family is swept in p at fixed r; along CurveAxis::R the prior is fixed.
MseCurve theory_curve(const std::string& name, const Prior& prior, const std::vector<double>& grid, CurveAxis axis,
                      double fixed = 1.0);

CsvTable curve_table(const std::vector<MseCurve>& curves);

}  // namespace aelab
