#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "aelab/error.hpp"
#include "aelab/priors.hpp"
#include "aelab/rng.hpp"

using namespace aelab;

namespace {

const std::vector<PriorKind> kAnalytic = {PriorKind::SparseGaussian, PriorKind::SparseRademacher,
                                          PriorKind::SparseLaplace, PriorKind::SparseGaussianMixture};

struct SampleStats {
  double mean = 0.0, m2 = 0.0, mean_abs = 0.0, zeros = 0.0;
};

SampleStats sample_stats(const Prior& prior, std::size_t n, SeedSpec seed) {
  Rng rng(seed);
  SampleStats s;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = prior.sample(rng);
    s.mean += x;
    s.m2 += x * x;
    s.mean_abs += std::abs(x);
    s.zeros += x == 0.0;
  }
  const double dn = static_cast<double>(n);
  s.mean /= dn;
  s.m2 /= dn;
  s.mean_abs /= dn;
  s.zeros /= dn;
  return s;
}

}  // namespace

TEST(Prior, ParseAndFormatRoundTrip) {
  const Prior p = Prior::parse("sparse_rademacher:p=0.8");
  EXPECT_EQ(p.kind(), PriorKind::SparseRademacher);
  EXPECT_DOUBLE_EQ(p.p(), 0.8);
  EXPECT_EQ(Prior::parse(p.to_string()).to_string(), p.to_string());
  EXPECT_EQ(Prior::parse("sparse_gaussian").p(), 1.0);
  EXPECT_THROW(Prior::parse("cauchy:p=0.5"), UsageError);
  EXPECT_THROW(Prior::parse("sparse_gaussian:q=0.5"), UsageError);
  EXPECT_THROW(Prior::parse("sparse_gaussian:p=1.5"), DomainError);
  EXPECT_THROW(Prior::sparse_laplace(0.0), DomainError);
}

TEST(SampleVector, GaussianSecondMoment) {
  const Vector x = sample_vector(Prior::sparse_gaussian(1.0), 100000, {1, 0});
  EXPECT_NEAR(x.squaredNorm() / 1e5, 1.0, 0.02);
}

TEST(SampleVector, RademacherSupportAndZeroFraction) {
  const Vector x = sample_vector(Prior::sparse_rademacher(0.5), 100000, {2, 0});
  const double a = 1.0 / std::sqrt(0.5);
  EXPECT_EQ(std::set<double>(x.data(), x.data() + x.size()), (std::set<double>{-a, 0.0, a}));
  const double zeros = static_cast<double>((x.array() == 0.0).count()) / 1e5;
  EXPECT_NEAR(zeros, 0.5, 0.01);
}

TEST(SampleVector, LaplaceSecondMomentMatchesQuadrature) {
  const double p = 0.4, rate = std::sqrt(2.0 * p);
  auto integrand = [&](double x) { return x * x * p * 0.5 * rate * std::exp(-rate * std::abs(x)); };
  const double quad =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -std::numeric_limits<double>::infinity(),
                                                                    std::numeric_limits<double>::infinity());
  EXPECT_NEAR(quad, 1.0, 1e-10);
  const Vector x = sample_vector(Prior::sparse_laplace(p), 100000, {3, 0});
  EXPECT_NEAR(x.squaredNorm() / 1e5, quad, 0.03);
}

TEST(SampleVector, UnitSecondMomentAndSymmetryForAllKinds) {
  for (PriorKind kind : kAnalytic)
    for (int k = 1; k <= 10; ++k) {
      const Prior prior(kind, k / 10.0);
      const SampleStats s = sample_stats(prior, 1000000, {static_cast<std::uint64_t>(k), 7});
      EXPECT_NEAR(s.m2, 1.0, 0.01) << prior.to_string();
      EXPECT_NEAR(s.mean, 0.0, 0.005) << prior.to_string();
    }
}

TEST(MeanAbs, ClosedForms) {
  EXPECT_NEAR(mean_abs(Prior::sparse_gaussian(1.0)), 0.7978845608, 1e-9);
  EXPECT_NEAR(mean_abs(Prior::sparse_rademacher(0.64)), 0.8, 1e-14);
  EXPECT_NEAR(mean_abs(Prior::sparse_gaussian(0.3)), std::sqrt(2.0 * 0.3 / std::numbers::pi), 1e-14);
}

TEST(MeanAbs, MixtureMatchesTenMillionSampleMonteCarlo) {
  const Prior prior = Prior::sparse_gaussian_mixture(0.9);
  const SampleStats s = sample_stats(prior, 10000000, {11, 0});
  EXPECT_NEAR(mean_abs(prior), s.mean_abs, 1e-3);
  // Frozen from scipy: p·E|N(1, (1−p)/p)| via foldnorm.
  EXPECT_NEAR(mean_abs(prior), 0.900229292590229, 1e-12);
}

TEST(MeanAbs, MixtureMatchesQuadratureOfItsDensity) {
  for (double p : {0.2, 0.5, 0.9}) {
    const DensityParts parts = density_parts(Prior::sparse_gaussian_mixture(p));
    auto integrand = [&](double x) { return std::abs(x) * parts.slab(x); };
    const double w = parts.slab_halfwidth;
    double quad = 0.0;
    for (auto [a, b] : {std::pair{-w, -1.0}, {-1.0, 0.0}, {0.0, 1.0}, {1.0, w}})
      quad += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, b, 15, 1e-13);
    EXPECT_NEAR(mean_abs(Prior::sparse_gaussian_mixture(p)), quad, 1e-10) << p;
  }
}

TEST(DensityParts, Examples) {
  const DensityParts g = density_parts(Prior::sparse_gaussian(0.3));
  EXPECT_DOUBLE_EQ(g.atom_weight, 0.7);
  const double var = 1.0 / 0.3;
  for (double x : {0.0, 0.7, -2.5})
    EXPECT_NEAR(g.slab(x), 0.3 * std::exp(-x * x / (2 * var)) / std::sqrt(2 * std::numbers::pi * var), 1e-15);

  const DensityParts r = density_parts(Prior::sparse_rademacher(0.5));
  EXPECT_DOUBLE_EQ(r.atom_weight, 0.5);
  EXPECT_FALSE(r.slab);
  ASSERT_EQ(r.discrete.size(), 2u);
  for (auto [loc, w] : r.discrete) {
    EXPECT_NEAR(std::abs(loc), std::sqrt(2.0), 1e-15);
    EXPECT_DOUBLE_EQ(w, 0.25);
  }
  EXPECT_EQ(density_parts(Prior::sparse_laplace(1.0)).atom_weight, 0.0);
  EXPECT_THROW(density_parts(Prior::empirical({1.0, -1.0})), UnsupportedError);
}

TEST(Whiten, DiagonalCovariance) {
  Rng rng({5, 0});
  Matrix data(10000, 2);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    data(i, 0) = 2.0 * rng.normal() + 3.0;
    data(i, 1) = rng.normal() - 1.0;
  }
  const WhitenedDataset w = whiten(data);
  EXPECT_EQ(w.rank, 2u);
  const Matrix cov = w.data.transpose() * w.data / 9999.0;
  EXPECT_LT((cov - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT(w.data.colwise().mean().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(w.whitener(0, 0), 0.5, 0.05);
}

TEST(Whiten, AlreadyWhiteIsStable) {
  Rng rng({6, 0});
  Matrix data(5000, 3);
  for (Eigen::Index i = 0; i < data.size(); ++i) data.data()[i] = rng.normal();
  const WhitenedDataset once = whiten(data);
  EXPECT_LT((once.whitener - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 0.05);
  const WhitenedDataset twice = whiten(once.data);
  EXPECT_LT((twice.data - once.data).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Whiten, RankDeficientMatchesEigenOracle) {
  Rng rng({7, 0});
  Matrix data(4000, 4);
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) data(i, j) = (j + 1.0) * rng.normal();
    data(i, 3) = data(i, 1);
  }
  const WhitenedDataset w = whiten(data);
  EXPECT_EQ(w.rank, 3u);
  const Matrix centered = data.rowwise() - data.colwise().mean();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(centered.transpose() * centered / 3999.0);
  const Matrix Q = eig.eigenvectors().rightCols(3);
  const Matrix cov = w.data.transpose() * w.data / 3999.0;
  EXPECT_LT((Q.transpose() * cov * Q - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((cov * eig.eigenvectors().col(0)).norm(), 1e-6);
  EXPECT_THROW(whiten(Matrix::Ones(1, 3)), StateError);
}

TEST(MaskPixels, Examples) {
  Rng rng({8, 0});
  Matrix data(100, 100);
  for (Eigen::Index i = 0; i < data.size(); ++i) data.data()[i] = rng.normal();
  EXPECT_EQ(mask_pixels(data, 1.0, {1, 0}), data);
  const Matrix ones = mask_pixels(Matrix::Ones(100, 100), 0.7, {2, 0});
  EXPECT_NEAR(ones.mean(), 0.7, 0.02);
  const Matrix sparse = mask_pixels(Matrix::Ones(300, 300), 0.05, {3, 0});
  EXPECT_NEAR(static_cast<double>((sparse.array() == 0.0).count()) / sparse.size(), 0.95, 0.01);
  EXPECT_THROW(mask_pixels(data, 0.0, {}), DomainError);
}

TEST(EmpiricalPrior, ResamplesItsSupport) {
  const Prior e = Prior::empirical({0.0, 0.0, 2.0, -2.0}, "inline");
  EXPECT_DOUBLE_EQ(e.p(), 0.5);
  EXPECT_DOUBLE_EQ(second_moment(e), 2.0);
  EXPECT_DOUBLE_EQ(mean_abs(e), 1.0);
  Rng rng({9, 0});
  for (int i = 0; i < 100; ++i) {
    const double x = e.sample(rng);
    EXPECT_TRUE(x == 0.0 || std::abs(x) == 2.0);
  }
  EXPECT_EQ(e.with_p(0.3).p(), 0.5);
}
