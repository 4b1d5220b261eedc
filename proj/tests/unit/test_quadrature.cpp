#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "aelab/quadrature.hpp"

using namespace aelab;

TEST(GaussHermite, GaussianMoments) {
  EXPECT_NEAR(gaussian_expectation([](double g) { return g * g; }), 1.0, 1e-13);
  EXPECT_NEAR(gaussian_expectation([](double g) { return std::pow(g, 4); }), 3.0, 1e-12);
  EXPECT_NEAR(gaussian_expectation([](double g) { return std::pow(g, 8); }), 105.0, 1e-9);
  EXPECT_NEAR(gaussian_expectation([](double g) { return std::cos(g); }), std::exp(-0.5), 1e-13);
  const auto& rule = gauss_hermite(40);
  double w = 0.0;
  for (double v : rule.weights) w += v;
  EXPECT_NEAR(w, 1.0, 1e-13);
  EXPECT_EQ(rule.nodes.size(), 40u);
}

TEST(Integrate, SmoothAndKinkedIntegrands) {
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x * x); }, -10, 10), std::sqrt(std::numbers::pi), 1e-12);
  EXPECT_NEAR(integrate([](double x) { return std::abs(x - 0.3); }, -1, 1, {0.3}), 1.09, 1e-12);
  EXPECT_NEAR(integrate([](double x) { return normal_pdf(x / 1e-3) / 1e-3; }, -1, 1, {0.0}), 1.0, 1e-9);
}

TEST(NormalFunctions, TailAccuracy) {
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-16);
  EXPECT_NEAR(normal_pdf(1.0), std::exp(-0.5) / std::sqrt(2 * std::numbers::pi), 1e-16);
  for (double x : {-40.0, -10.0, -1.0, 2.0})
    EXPECT_NEAR(log_normal_cdf(x), std::log(0.5 * std::erfc(-x / std::sqrt(2.0))), 1e-12 * std::abs(std::log(0.5 * std::erfc(-x / std::sqrt(2.0)))) + 1e-15);
  EXPECT_NEAR(log_normal_cdf(-200.0), -0.5 * 200.0 * 200.0 - std::log(200.0) - 0.5 * std::log(2 * std::numbers::pi), 1e-4);
  for (double x : {0.0, 1.0, 5.0}) EXPECT_NEAR(erfcx(x), std::exp(x * x) * std::erfc(x), 1e-13 * erfcx(x));
  EXPECT_NEAR(erfcx(1e4), 1.0 / (1e4 * std::sqrt(std::numbers::pi)), 1e-12);
}

TEST(NormalFunctions, InverseMillsAndHelpers) {
  for (double u : {-3.0, 0.0, 2.0}) EXPECT_NEAR(inverse_mills(u), normal_pdf(u) / normal_cdf(u), 1e-13);
  EXPECT_NEAR(inverse_mills(-1e3), 1e3, 1e-2);
  EXPECT_NEAR(log_add_exp(std::log(2.0), std::log(3.0)), std::log(5.0), 1e-15);
  EXPECT_NEAR(log_add_exp(-1e300, 0.0), 0.0, 1e-15);
  const double t = 0.7;
  EXPECT_NEAR(log_partial_moment(t), std::log(t * normal_cdf(t) + normal_pdf(t)), 1e-14);
}
