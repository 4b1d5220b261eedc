#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "aelab/linalg.hpp"
#include "aelab/priors.hpp"
#include "aelab/rng.hpp"

namespace aelab {

/// f(x) = α1·x + α2·tanh(α3·x).
struct ParametricNonlin {
  static constexpr std::size_t kParams = 3;
  double alpha1 = 1.0;
  double alpha2 = 0.1;
  double alpha3 = 1.0;

  double operator()(double x) const;
  double derivative(double x) const;
  std::array<double, kParams> param_gradient(double x) const;
  std::array<double, kParams> params() const { return {alpha1, alpha2, alpha3}; }
  void set_params(const std::array<double, kParams>& v);

  static ParametricNonlin identity() { return {1.0, 0.0, 1.0}; }
  static ParametricNonlin zero() { return {0.0, 0.0, 1.0}; }
};

/// Two tanh branches: γ1·tanh(ε1·x − a1) + b1 for x ≥ 0, γ2·tanh(ε2·x − a2) + b2 for x < 0.
struct TanhMixtureNonlin {
  static constexpr std::size_t kParams = 8;
  double gamma1 = 1.0, eps1 = 1.0, a1 = 0.0, b1 = 0.0;
  double gamma2 = 1.0, eps2 = 1.0, a2 = 0.0, b2 = 0.0;

  double operator()(double x) const;
  double derivative(double x) const;
  std::array<double, kParams> param_gradient(double x) const;
  std::array<double, kParams> params() const { return {gamma1, eps1, a1, b1, gamma2, eps2, a2, b2}; }
  void set_params(const std::array<double, kParams>& v);

  /// Odd function: the negative branch mirrors the positive one.
  static TanhMixtureNonlin antisymmetric(double gamma, double eps, double a, double b);
};

/// Fixed scalar map, typically a Bayes denoiser; not trainable.
struct ClosedFormNonlin {
  std::function<double(double)> fn;
  std::string label;

  double operator()(double x) const;
};

using Nonlinearity = std::variant<ParametricNonlin, TanhMixtureNonlin, ClosedFormNonlin>;

double apply(const Nonlinearity& f, double x);

struct LinearDecoderAE {
  EncoderMatrix B;
  Matrix A;  // d × n
};

struct DenoisedAE {
  EncoderMatrix B;
  Matrix A;
  Nonlinearity f;
};

/// a ⊕ b = β·a + γ·b
struct Merge {
  double beta = 1.0;
  double gamma = 0.0;
};

struct MultilayerDecoderAE {
  EncoderMatrix B;
  Matrix W1, W2;  // d × n
  Matrix V1;      // n × d
  ParametricNonlin f1, f2, g1;
  std::array<Merge, 3> merge;
};

using Autoencoder = std::variant<LinearDecoderAE, DenoisedAE, MultilayerDecoderAE>;

std::string architecture_name(const Autoencoder& model);
const EncoderMatrix& encoder(const Autoencoder& model);
/// Throws DimensionError unless all matrices chain together.
void check_dimensions(const Autoencoder& model);

/// sign(⟨b_i, x⟩) with exact zeros replaced by seeded Rademacher draws.
Vector encode(const EncoderMatrix& B, const Vector& x, SeedSpec seed);
/// Elementwise sign with Rademacher tie-breaking.
Matrix sign_with_ties(const Matrix& u, Rng& rng);

Vector decode(const Autoencoder& model, const Vector& z);
/// Decodes each column of z.
Matrix decode_batch(const Autoencoder& model, const Matrix& z);
/// Intermediate values of the multilayer dataflow for a batch of codes.
struct MultilayerForward {
  Matrix z1, x1, xh1, u, z2, w, x2, v, xh2;
};
MultilayerForward multilayer_forward(const MultilayerDecoderAE& model, const Matrix& z1);

struct MseEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

MseEstimate mse_monte_carlo(const Autoencoder& model, const Prior& prior, std::size_t n_samples, SeedSpec seed);

/// Per-mask quantities of the arcsin objective: normalized masked rows and
/// the code correlation matrix K = E[z zᵀ] (unit diagonal).
struct MaskedTerms {
  Matrix B_hat;                 // n × d, rows b̄_k/‖b̄_k‖ (zero rows stay zero)
  Vector norms;                 // ‖b̄_k‖
  Matrix gram;                  // B̂ B̂ᵀ
  Matrix K;                     // (2/π)·arcsin(gram) off-diagonal, 1 on the diagonal
};

MaskedTerms masked_terms(const Matrix& B, const Mask& mask);

/// Restored-constant arcsin formula for a fixed mask:
/// 1 + d⁻¹[tr(AᵀA K) − 2·√(2/π)·p^{-1/2}·tr(B̂ A)].
double masked_linear_mse(const Matrix& A, const MaskedTerms& terms, double p);

/// Deterministic at p = 1; otherwise averaged over n_masks nonzero masks.
double exact_linear_mse(const Matrix& A, const EncoderMatrix& B, double p, std::size_t n_masks, SeedSpec seed);
double exact_linear_mse(const Matrix& A, const Matrix& B, double p, const std::vector<Mask>& masks);

std::vector<Mask> sample_masks(std::size_t d, double p, std::size_t n_masks, SeedSpec seed);

void save_checkpoint(const Autoencoder& model, const std::filesystem::path& dir);
/// Closed-form nonlinearities are restored with their label only; callers
/// rebind `fn` (see bind_closed_form in the experiments module).
Autoencoder load_checkpoint(const std::filesystem::path& dir);

}  // namespace aelab
