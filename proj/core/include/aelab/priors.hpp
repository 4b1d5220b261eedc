#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "aelab/linalg.hpp"
#include "aelab/rng.hpp"

namespace aelab {

enum class PriorKind { SparseGaussian, SparseRademacher, SparseLaplace, SparseGaussianMixture, Empirical };

std::string to_string(PriorKind kind);
PriorKind prior_kind_from_string(const std::string& s);

/// Scalar law with unit second moment: zero with probability 1 − p, slab otherwise.
class Prior {
 public:
  Prior() = default;
  Prior(PriorKind kind, double p);

  static Prior sparse_gaussian(double p) { return {PriorKind::SparseGaussian, p}; }
  static Prior sparse_rademacher(double p) { return {PriorKind::SparseRademacher, p}; }
  static Prior sparse_laplace(double p) { return {PriorKind::SparseLaplace, p}; }
  static Prior sparse_gaussian_mixture(double p) { return {PriorKind::SparseGaussianMixture, p}; }
  static Prior empirical(std::vector<double> samples, std::string source = {});

  /// "sparse_gaussian:p=0.4", "sparse_rademacher:p=0.8", "sparse_laplace:p=0.4",
  /// "sparse_gaussian_mixture:p=0.9", "empirical:file=path.csv".
  static Prior parse(const std::string& spec);
  std::string to_string() const;

  /// Same family at another keep probability; Empirical is returned unchanged.
  Prior with_p(double p) const;

  PriorKind kind() const { return kind_; }
  double p() const { return p_; }
  bool analytic() const { return kind_ != PriorKind::Empirical; }
  const std::vector<double>& samples() const;

  double sample(Rng& rng) const;

 private:
  PriorKind kind_ = PriorKind::SparseGaussian;
  double p_ = 1.0;
  std::shared_ptr<const std::vector<double>> samples_;
  std::string source_;
};

Vector sample_vector(const Prior& prior, std::size_t d, SeedSpec seed);
Vector sample_vector(const Prior& prior, std::size_t d, Rng& rng);
/// d × count matrix of i.i.d. draws, one sample per column.
Matrix sample_matrix(const Prior& prior, std::size_t d, std::size_t count, Rng& rng);

double mean_abs(const Prior& prior);
double second_moment(const Prior& prior);

/// Atom at zero, a continuous slab density (integrating to p, possibly absent)
/// and weighted point masses away from zero.
struct DensityParts {
  double atom_weight = 0.0;
  std::function<double(double)> slab;
  std::vector<std::pair<double, double>> discrete;  // (location, weight)
  double slab_halfwidth = 0.0;                      // slab support used for quadrature: [−w, w]
  std::vector<double> slab_breakpoints;
};

DensityParts density_parts(const Prior& prior);

struct WhitenedDataset {
  Matrix data;  // samples × d
  Vector mean;
  Matrix whitener;
  std::size_t rank = 0;
};

WhitenedDataset whiten(const Matrix& data);
Matrix mask_pixels(const Matrix& data, double keep_prob, SeedSpec seed);

}  // namespace aelab
