#pragma once

#include <functional>
#include <string>

#include "aelab/io.hpp"
#include "aelab/priors.hpp"
#include "aelab/se_params.hpp"

namespace aelab {

/// Posterior means E[x | μx + σg = y] in closed form.
double fstar_sparse_gaussian(double y, const StateEvolutionParams& se, double p);
double fstar_sparse_rademacher(double y, const StateEvolutionParams& se, double p);
double fstar_sparse_laplace(double y, const StateEvolutionParams& se, double p);

struct PosteriorMean {
  double value = 0.0;
  double std_error = 0.0;   // zero for quadrature and exact sums
  bool low_precision = false;
};

/// Bayes rule by quadrature over the atom + slab decomposition, or a
/// sample-weighted ratio for empirical priors.
PosteriorMean posterior_mean_numeric(const Prior& prior, const StateEvolutionParams& se, double y);

enum class DenoiserForm { ClosedForm, Quadrature, MonteCarlo };

struct DenoiserSpec {
  Prior prior;
  StateEvolutionParams se;
  DenoiserForm form = DenoiserForm::ClosedForm;
};

std::function<double(double)> make_denoiser(const DenoiserSpec& spec);
/// Closed form where one exists, quadrature for the mixture, an
/// interpolated table for empirical priors.
std::function<double(double)> optimal_denoiser(const Prior& prior, const StateEvolutionParams& se);

/// Largest finite-difference slope on an even grid; reported, not enforced.
double max_slope(const std::function<double(double)>& f, double lo, double hi, std::size_t points);

CsvTable denoiser_table(const std::function<double(double)>& f, double lo, double hi, std::size_t points);

}  // namespace aelab
