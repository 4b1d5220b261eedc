#include "aelab/priors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "aelab/error.hpp"
#include "aelab/quadrature.hpp"

namespace aelab {

namespace {

void check_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("prior keep probability must lie in (0,1]");
}

double mixture_sd(double p) { return std::sqrt((1.0 - p) / p); }

double folded_normal_mean(double m, double s) {
  if (s == 0.0) return std::abs(m);
  return s * std::sqrt(2.0 / std::numbers::pi) * std::exp(-m * m / (2.0 * s * s)) +
         m * (1.0 - 2.0 * normal_cdf(-m / s));
}

}  // namespace

std::string to_string(PriorKind kind) {
  switch (kind) {
    case PriorKind::SparseGaussian: return "sparse_gaussian";
    case PriorKind::SparseRademacher: return "sparse_rademacher";
    case PriorKind::SparseLaplace: return "sparse_laplace";
    case PriorKind::SparseGaussianMixture: return "sparse_gaussian_mixture";
    case PriorKind::Empirical: return "empirical";
  }
  return "empirical";
}

PriorKind prior_kind_from_string(const std::string& s) {
  if (s == "sparse_gaussian" || s == "gaussian") return PriorKind::SparseGaussian;
  if (s == "sparse_rademacher" || s == "rademacher") return PriorKind::SparseRademacher;
  if (s == "sparse_laplace" || s == "laplace") return PriorKind::SparseLaplace;
  if (s == "sparse_gaussian_mixture" || s == "mixture") return PriorKind::SparseGaussianMixture;
  if (s == "empirical") return PriorKind::Empirical;
  throw UsageError("unknown prior family '" + s + "'");
}

Prior::Prior(PriorKind kind, double p) : kind_(kind), p_(p) {
  if (kind == PriorKind::Empirical) throw UsageError("use Prior::empirical for sample-based priors");
  check_p(p);
}

Prior Prior::empirical(std::vector<double> samples, std::string source) {
  Prior prior;
  prior.kind_ = PriorKind::Empirical;
  const auto nonzero = std::count_if(samples.begin(), samples.end(), [](double v) { return v != 0.0; });
  prior.p_ = samples.empty() ? 1.0 : std::max(1e-12, static_cast<double>(nonzero) / samples.size());
  prior.samples_ = std::make_shared<const std::vector<double>>(std::move(samples));
  prior.source_ = std::move(source);
  return prior;
}

Prior Prior::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  double p = 1.0;
  std::string file;
  if (colon != std::string::npos) {
    std::istringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("prior spec '" + spec + "': expected key=value");
      const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
      if (key == "p") {
        try {
          p = std::stod(value);
        } catch (const std::exception&) {
          throw UsageError("prior spec '" + spec + "': bad p");
        }
      } else if (key == "file") {
        file = value;
      } else {
        throw UsageError("prior spec '" + spec + "': unknown key '" + key + "'");
      }
    }
  }
  const PriorKind kind = prior_kind_from_string(family);
  if (kind == PriorKind::Empirical) {
    if (file.empty()) throw UsageError("empirical prior needs file=...");
    const Matrix m = read_matrix_csv(file);
    return empirical(std::vector<double>(m.data(), m.data() + m.size()), file);
  }
  return Prior(kind, p);
}

std::string Prior::to_string() const {
  std::ostringstream out;
  out.precision(15);
  if (kind_ == PriorKind::Empirical) {
    out << "empirical:file=" << source_;
  } else {
    out << aelab::to_string(kind_) << ":p=" << p_;
  }
  return out.str();
}

Prior Prior::with_p(double p) const {
  if (kind_ == PriorKind::Empirical) return *this;
  return Prior(kind_, p);
}

const std::vector<double>& Prior::samples() const {
  if (!samples_ || samples_->empty()) throw StateError("empirical prior has no samples");
  return *samples_;
}

double Prior::sample(Rng& rng) const {
  switch (kind_) {
    case PriorKind::SparseGaussian:
      if (p_ < 1.0 && !rng.bernoulli(p_)) return 0.0;
      return rng.normal() / std::sqrt(p_);
    case PriorKind::SparseRademacher:
      if (p_ < 1.0 && !rng.bernoulli(p_)) return 0.0;
      return rng.rademacher() / std::sqrt(p_);
    case PriorKind::SparseLaplace: {
      if (p_ < 1.0 && !rng.bernoulli(p_)) return 0.0;
      const double rate = std::sqrt(2.0 * p_);
      return rng.rademacher() * (-std::log1p(-rng.uniform()) / rate);
    }
    case PriorKind::SparseGaussianMixture:
      if (p_ < 1.0 && !rng.bernoulli(p_)) return 0.0;
      return rng.rademacher() + mixture_sd(p_) * rng.normal();
    case PriorKind::Empirical: {
      const auto& s = samples();
      return s[static_cast<std::size_t>(rng() % s.size())];
    }
  }
  return 0.0;
}

Vector sample_vector(const Prior& prior, std::size_t d, Rng& rng) {
  if (d < 1) throw DimensionError("sample_vector: d must be positive");
  Vector x(static_cast<Eigen::Index>(d));
  for (auto& v : x) v = prior.sample(rng);
  return x;
}

Vector sample_vector(const Prior& prior, std::size_t d, SeedSpec seed) {
  Rng rng(seed);
  return sample_vector(prior, d, rng);
}

Matrix sample_matrix(const Prior& prior, std::size_t d, std::size_t count, Rng& rng) {
  Matrix x(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(count));
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = prior.sample(rng);
  return x;
}

double mean_abs(const Prior& prior) {
  const double p = prior.p();
  switch (prior.kind()) {
    case PriorKind::SparseGaussian: return std::sqrt(2.0 * p / std::numbers::pi);
    case PriorKind::SparseRademacher: return std::sqrt(p);
    case PriorKind::SparseLaplace: return std::sqrt(p / 2.0);
    case PriorKind::SparseGaussianMixture: return p * folded_normal_mean(1.0, mixture_sd(p));
    case PriorKind::Empirical: {
      const auto& s = prior.samples();
      double acc = 0.0;
      for (double v : s) acc += std::abs(v);
      return acc / s.size();
    }
  }
  return 0.0;
}

double second_moment(const Prior& prior) {
  if (prior.analytic()) return 1.0;
  const auto& s = prior.samples();
  double acc = 0.0;
  for (double v : s) acc += v * v;
  return acc / s.size();
}

DensityParts density_parts(const Prior& prior) {
  const double p = prior.p();
  DensityParts parts;
  parts.atom_weight = 1.0 - p;
  switch (prior.kind()) {
    case PriorKind::SparseGaussian:
      parts.slab = [p](double x) { return p * std::sqrt(p) * normal_pdf(std::sqrt(p) * x); };
      parts.slab_halfwidth = 12.0 / std::sqrt(p);
      parts.slab_breakpoints = {0.0};
      break;
    case PriorKind::SparseRademacher:
      parts.discrete = {{-1.0 / std::sqrt(p), p / 2.0}, {1.0 / std::sqrt(p), p / 2.0}};
      break;
    case PriorKind::SparseLaplace: {
      const double rate = std::sqrt(2.0 * p);
      parts.slab = [p, rate](double x) { return p * 0.5 * rate * std::exp(-rate * std::abs(x)); };
      parts.slab_halfwidth = 12.0 / std::sqrt(p);
      parts.slab_breakpoints = {0.0};
      break;
    }
    case PriorKind::SparseGaussianMixture: {
      const double s = mixture_sd(p);
      if (s == 0.0) {
        parts.discrete = {{-1.0, 0.5}, {1.0, 0.5}};
        break;
      }
      parts.slab = [p, s](double x) {
        return p * 0.5 * (normal_pdf((x - 1.0) / s) + normal_pdf((x + 1.0) / s)) / s;
      };
      parts.slab_halfwidth = 1.0 + 12.0 * s;
      parts.slab_breakpoints = {-1.0, 0.0, 1.0};
      break;
    }
    case PriorKind::Empirical:
      throw UnsupportedError("density_parts: empirical priors have no analytic density");
  }
  return parts;
}

WhitenedDataset whiten(const Matrix& data) {
  if (data.rows() < 2) throw StateError("whiten: need at least two samples");
  WhitenedDataset out;
  out.mean = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - out.mean.transpose();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(data.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  const Vector& lambda = eig.eigenvalues();
  const double cutoff = 1e-10 * lambda.maxCoeff();
  Vector inv_sqrt(lambda.size());
  out.rank = 0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > cutoff) {
      inv_sqrt[i] = 1.0 / std::sqrt(lambda[i]);
      ++out.rank;
    } else {
      inv_sqrt[i] = 0.0;
    }
  }
  out.whitener = eig.eigenvectors() * inv_sqrt.asDiagonal() * eig.eigenvectors().transpose();
  out.data = centered * out.whitener;
  return out;
}

Matrix mask_pixels(const Matrix& data, double keep_prob, SeedSpec seed) {
  if (!(keep_prob > 0.0 && keep_prob <= 1.0)) throw DomainError("mask_pixels: keep_prob outside (0,1]");
  Rng rng(seed);
  Matrix out = data;
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      if (!rng.bernoulli(keep_prob)) out(i, j) = 0.0;
  return out;
}

}  // namespace aelab
