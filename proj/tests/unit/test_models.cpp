#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "aelab/error.hpp"
#include "aelab/models.hpp"
#include "aelab/rng.hpp"

using namespace aelab;

namespace {

const double kC = std::sqrt(2.0 / std::numbers::pi);

Matrix random_matrix(Eigen::Index r, Eigen::Index c, double sd, SeedSpec seed) {
  Rng rng(seed);
  return gaussian_matrix(r, c, sd, rng);
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("aelab_models_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Nonlinearity, ParametricValueDerivativeAndParamGradient) {
  const ParametricNonlin f{0.7, -0.4, 1.3};
  const double x = 0.37, h = 1e-6;
  EXPECT_DOUBLE_EQ(f(x), 0.7 * x - 0.4 * std::tanh(1.3 * x));
  EXPECT_NEAR(f.derivative(x), (f(x + h) - f(x - h)) / (2 * h), 1e-8);
  const auto g = f.param_gradient(x);
  for (std::size_t k = 0; k < 3; ++k) {
    auto up = f.params(), dn = f.params();
    up[k] += h;
    dn[k] -= h;
    ParametricNonlin fu = f, fd = f;
    fu.set_params(up);
    fd.set_params(dn);
    EXPECT_NEAR(g[k], (fu(x) - fd(x)) / (2 * h), 1e-8) << k;
  }
}

TEST(Nonlinearity, TanhMixtureBranchesAndAntisymmetry) {
  const TanhMixtureNonlin f = TanhMixtureNonlin::antisymmetric(1.5, 2.0, 0.3, 0.1);
  for (double x : {0.2, 1.0, 3.0}) EXPECT_NEAR(f(-x), -f(x), 1e-15);
  EXPECT_DOUBLE_EQ(f(0.5), 1.5 * std::tanh(2.0 * 0.5 - 0.3) + 0.1);
  const double h = 1e-6;
  for (double x : {-0.8, 0.4}) {
    EXPECT_NEAR(f.derivative(x), (f(x + h) - f(x - h)) / (2 * h), 1e-7);
    const auto g = f.param_gradient(x);
    for (std::size_t k = 0; k < TanhMixtureNonlin::kParams; ++k) {
      auto up = f.params(), dn = f.params();
      up[k] += h;
      dn[k] -= h;
      TanhMixtureNonlin fu = f, fd = f;
      fu.set_params(up);
      fd.set_params(dn);
      EXPECT_NEAR(g[k], (fu(x) - fd(x)) / (2 * h), 1e-7) << k;
    }
  }
}

TEST(Nonlinearity, UnboundClosedFormThrows) {
  const ClosedFormNonlin f{{}, "fstar|x"};
  EXPECT_THROW(f(1.0), StateError);
  EXPECT_DOUBLE_EQ(aelab::apply(Nonlinearity{ClosedFormNonlin{[](double v) { return 2 * v; }, "twice"}}, 3.0), 6.0);
}

TEST(Encode, Examples) {
  const EncoderMatrix one(Matrix::Ones(1, 1), Provenance::Loaded);
  EXPECT_EQ(encode(one, Vector::Constant(1, 2.0), {}), Vector::Ones(1));
  Vector x(2);
  x << -3, 5;
  Vector z(2);
  z << -1, 1;
  EXPECT_EQ(encode(EncoderMatrix::identity_like(2, 2), x, {}), z);
  EXPECT_THROW(encode(one, x, {}), DimensionError);
}

TEST(Encode, TiesAreFairCoinFlips) {
  const EncoderMatrix one(Matrix::Ones(1, 1), Provenance::Loaded);
  int plus = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const double z = encode(one, Vector::Zero(1), {s, 0})[0];
    ASSERT_TRUE(z == 1.0 || z == -1.0);
    plus += z > 0;
  }
  EXPECT_NEAR(plus / 1e4, 0.5, 0.02);
}

TEST(Decode, LinearZeroAndReductions) {
  const EncoderMatrix B = EncoderMatrix::haar(3, 5, {1, 0});
  const Vector z = Vector::Ones(3);
  EXPECT_EQ(decode(LinearDecoderAE{B, Matrix::Zero(5, 3)}, z), Vector::Zero(5));

  const Matrix A = random_matrix(5, 3, 1.0, {2, 0});
  Vector zz(3);
  zz << 1, -1, 1;
  const Vector lin = decode(LinearDecoderAE{B, A}, zz);
  EXPECT_EQ(decode(DenoisedAE{B, A, ParametricNonlin{1.0, 0.0, 1.0}}, zz), lin);

  MultilayerDecoderAE ml{B, A, random_matrix(5, 3, 1.0, {3, 0}), random_matrix(3, 5, 1.0, {4, 0}),
                         ParametricNonlin::identity(), ParametricNonlin::identity(), ParametricNonlin::zero(),
                         {Merge{0.3, 0.8}, Merge{1.0, 0.0}, Merge{0.0, 1.0}}};
  EXPECT_LT((decode(ml, zz) - lin).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(decode(LinearDecoderAE{B, A}, Vector::Ones(2)), DimensionError);
}

TEST(CheckDimensions, RejectsMismatchedDecoder) {
  const EncoderMatrix B = EncoderMatrix::haar(3, 5, {1, 0});
  EXPECT_NO_THROW(check_dimensions(LinearDecoderAE{B, Matrix::Zero(5, 3)}));
  EXPECT_THROW(check_dimensions(LinearDecoderAE{B, Matrix::Zero(3, 5)}), DimensionError);
}

TEST(MseMonteCarlo, ZeroDecoderGivesSecondMoment) {
  const LinearDecoderAE m{EncoderMatrix::haar(10, 20, {1, 0}), Matrix::Zero(20, 10)};
  for (const Prior& prior : {Prior::sparse_gaussian(0.3), Prior::sparse_laplace(0.6), Prior::sparse_rademacher(0.9)}) {
    const MseEstimate e = mse_monte_carlo(m, prior, 20000, {2, 0});
    EXPECT_NEAR(e.estimate, 1.0, 3 * e.std_error) << prior.to_string();
  }
}

TEST(MseMonteCarlo, RademacherIdentityIsExact) {
  const LinearDecoderAE m{EncoderMatrix::identity_like(16, 16), Matrix::Identity(16, 16)};
  const MseEstimate e = mse_monte_carlo(m, Prior::sparse_rademacher(1.0), 1000, {3, 0});
  EXPECT_EQ(e.estimate, 0.0);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(MseMonteCarlo, HaarGaussianMatchesOneMinusTwoOverPi) {
  const EncoderMatrix B = EncoderMatrix::haar(400, 400, {4, 0});
  const LinearDecoderAE m{B, kC * B.matrix().transpose()};
  const MseEstimate e = mse_monte_carlo(m, Prior::sparse_gaussian(1.0), 4000, {5, 0});
  EXPECT_NEAR(e.estimate, 1.0 - 2.0 / std::numbers::pi, 0.01);
}

TEST(MseMonteCarlo, DeterministicAcrossCalls) {
  const LinearDecoderAE m{EncoderMatrix::haar(8, 16, {1, 0}), random_matrix(16, 8, 0.3, {2, 0})};
  const auto a = mse_monte_carlo(m, Prior::sparse_gaussian(0.4), 5000, {9, 9});
  const auto b = mse_monte_carlo(m, Prior::sparse_gaussian(0.4), 5000, {9, 9});
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(MaskedTerms, KHasUnitDiagonalAndArcsinOffDiagonal) {
  const Matrix B = random_matrix(4, 9, 1.0, {6, 0});
  const Mask mask = sample_mask(9, 0.6, true, {7, 0});
  const MaskedTerms t = masked_terms(B, mask);
  const Matrix bbar = apply_mask(B, mask);
  for (Eigen::Index k = 0; k < 4; ++k) {
    EXPECT_NEAR(t.norms[k], bbar.row(k).norm(), 1e-14);
    EXPECT_DOUBLE_EQ(t.K(k, k), 1.0);
    for (Eigen::Index j = 0; j < 4; ++j) {
      if (j == k) continue;
      const double g = bbar.row(k).dot(bbar.row(j)) / (bbar.row(k).norm() * bbar.row(j).norm());
      EXPECT_NEAR(t.K(k, j), 2.0 / std::numbers::pi * std::asin(g), 1e-13);
    }
  }
}

TEST(ExactLinearMse, OrthonormalRowsAtPOne) {
  const EncoderMatrix B = EncoderMatrix::haar(32, 32, {8, 0});
  const Matrix A = kC * B.matrix().transpose();
  EXPECT_NEAR(exact_linear_mse(A, B, 1.0, 1, {}), 1.0 - 2.0 / std::numbers::pi, 1e-12);
  EXPECT_DOUBLE_EQ(exact_linear_mse(Matrix::Zero(32, 32), B, 0.5, 8, {1, 0}), 1.0);
  EXPECT_THROW(exact_linear_mse(A, B, 0.0, 8, {}), DomainError);
}

TEST(ExactLinearMse, MatchesMonteCarloOnRandomInstances) {
  for (std::uint64_t inst = 0; inst < 3; ++inst) {
    const std::size_t d = 12, n = 6;
    const EncoderMatrix B(random_matrix(n, d, 1.0, {inst, 1}), Provenance::GaussianInit);
    const Matrix A = random_matrix(d, n, 0.3, {inst, 2});
    const double p = 0.5;
    const auto masks = sample_masks(d, p, 4000, {inst, 3});
    std::vector<double> per_mask;
    for (const auto& m : masks) per_mask.push_back(masked_linear_mse(A, masked_terms(B.matrix(), m), p));
    double mean = 0.0, var = 0.0;
    for (double v : per_mask) mean += v;
    mean /= per_mask.size();
    for (double v : per_mask) var += (v - mean) * (v - mean);
    const double se_exact = std::sqrt(var / (per_mask.size() - 1) / per_mask.size());
    EXPECT_NEAR(exact_linear_mse(A, B.matrix(), p, masks), mean, 1e-12);

    const MseEstimate mc = mse_monte_carlo(LinearDecoderAE{B, A}, Prior::sparse_gaussian(p), 400000, {inst, 4});
    EXPECT_NEAR(mean, mc.estimate, 3.0 * std::hypot(se_exact, mc.std_error)) << inst;
  }
}

TEST(Checkpoint, RoundTripsEveryArchitecture) {
  const EncoderMatrix B = EncoderMatrix::haar(3, 6, {1, 0});
  const Matrix A = random_matrix(6, 3, 1.0, {2, 0});
  const std::vector<Autoencoder> models = {
      LinearDecoderAE{B, A},
      DenoisedAE{B, A, ParametricNonlin{0.9, 0.2, 1.7}},
      DenoisedAE{B, A, TanhMixtureNonlin::antisymmetric(1.2, 0.8, 0.1, -0.05)},
      MultilayerDecoderAE{B, A, random_matrix(6, 3, 1.0, {3, 0}), random_matrix(3, 6, 1.0, {4, 0}),
                          ParametricNonlin{1.0, 0.1, 1.0}, ParametricNonlin{0.5, 0.3, 2.0},
                          ParametricNonlin{1.1, -0.2, 0.7}, {Merge{1.0, 0.0}, Merge{1.0, 0.1}, Merge{0.0, 1.0}}},
  };
  Vector z(3);
  z << 1, -1, -1;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto dir = scratch("ckpt" + std::to_string(i));
    save_checkpoint(models[i], dir);
    const Autoencoder back = load_checkpoint(dir);
    EXPECT_EQ(architecture_name(back), architecture_name(models[i]));
    EXPECT_LT((decode(back, z) - decode(models[i], z)).cwiseAbs().maxCoeff(), 1e-13) << i;
    std::filesystem::remove_all(dir);
  }
}

TEST(Checkpoint, ClosedFormKeepsLabelOnly) {
  const EncoderMatrix B = EncoderMatrix::haar(2, 4, {1, 0});
  const auto dir = scratch("closed");
  save_checkpoint(DenoisedAE{B, B.matrix().transpose(), ClosedFormNonlin{[](double v) { return v; }, "custom"}}, dir);
  const Autoencoder back = load_checkpoint(dir);
  const auto& f = std::get<ClosedFormNonlin>(std::get<DenoisedAE>(back).f);
  EXPECT_EQ(f.label, "custom");
  EXPECT_FALSE(f.fn);
  std::filesystem::remove_all(dir);
  EXPECT_THROW(load_checkpoint(dir), StateError);
}
