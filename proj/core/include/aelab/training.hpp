#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aelab/io.hpp"
#include "aelab/linalg.hpp"
#include "aelab/models.hpp"
#include "aelab/priors.hpp"
#include "aelab/rng.hpp"

namespace aelab {

struct TrajectoryPoint {
  std::size_t iter = 0;
  double loss = 0.0;
  double loss_stderr = 0.0;
  std::vector<std::pair<std::string, double>> diagnostics;

  double diagnostic(const std::string& name) const;
};

class Trajectory {
 public:
  /// Throws StateError unless iterations strictly increase.
  void append(TrajectoryPoint point);
  const std::vector<TrajectoryPoint>& points() const { return points_; }
  bool empty() const { return points_.empty(); }
  const TrajectoryPoint& back() const { return points_.back(); }

  /// iter, loss, loss_stderr, ssT_dev, subspace_drift, orth_defect, perm_score,
  /// followed by any further diagnostics in first-seen order.
  CsvTable to_csv() const;

 private:
  std::vector<TrajectoryPoint> points_;
};

struct TrainableFlags {
  bool encoder = true;
  bool decoder = true;       // A, or W1/W2/V1 for the multilayer decoder
  bool nonlinearity = true;
  bool merges = true;
};

struct SgdConfig {
  /// Step on the gradient of the per-sample squared error ‖x − x̂‖².
  double learning_rate = 0.05;
  std::size_t batch_size = 64;
  std::size_t n_iters = 1000;
  double tau = 0.1;
  SeedSpec seed{};
  TrainableFlags trainable{};
  std::size_t eval_every = 100;
  std::size_t eval_samples = 4096;
  double encoder_lr_scale = 1.0;
  double nonlin_lr_scale = 1.0;
  /// Learning rate decays linearly from 1 to this fraction over the run.
  double final_lr_fraction = 1.0;
};

struct SgdResult {
  Autoencoder model;
  Trajectory trajectory;
  bool aborted = false;
  std::string abort_reason;
};

SgdResult sgd_train(Autoencoder model, const Prior& prior, const SgdConfig& cfg);

/// Straight-through surrogate of sign: tanh(x/τ) and its derivative.
double straight_through(double x, double tau);
double straight_through_derivative(double x, double tau);

/// Initial parameters: B rows N(0,1/d) then normalized, A ~ N(0,1/n).
LinearDecoderAE init_linear(std::size_t d, std::size_t n, SeedSpec seed);
DenoisedAE init_denoised(std::size_t d, std::size_t n, SeedSpec seed, bool tanh_mixture = false);
/// W1 = W2 = Bᵀ, V1 = B; f1 = f2 = g1 = (1, 0.1, 1); merges start at the
/// one-step decoder (⊕₃ = (1, 0)) with a small second-iterate path.
MultilayerDecoderAE init_multilayer(const EncoderMatrix& B);

/// Closed-form decoder for a fixed encoder: minimizer of the masked arcsin objective.
Matrix optimal_A(const EncoderMatrix& B, double p, std::size_t n_masks, SeedSpec seed);
Matrix optimal_A(const Matrix& B, double p, const std::vector<Mask>& masks);

/// Gradient in B of exact_linear_mse(A, B, p, masks), rows of B taken as raw
/// (unnormalized) parameters.
Matrix analytic_gradient(const Matrix& A, const Matrix& B, double p, const std::vector<Mask>& masks);

struct GdminConfig {
  double eta = 0.0;  // 0 selects 0.5/√d
  std::size_t n_steps = 3000;
  double noise_sigma = 0.0;
  std::size_t n_masks = 32;
  double p = 1.0;
  SeedSpec seed{};
  std::size_t record_every = 1;
};

/// Alternating scheme: A ← optimal_A(B), B ← row_normalize(B − η(∇ + G)), where
/// ∇ is the gradient of d·MSE (the trace objective's scale).
class GdminRunner {
 public:
  GdminRunner(std::size_t d, double r, const GdminConfig& cfg);

  void step();
  std::size_t iteration() const { return iter_; }
  const Matrix& B() const { return B_; }
  const Matrix& A() const { return A_; }
  double eta() const { return eta_; }
  /// Masked objective of the last step's (A, B) pair over that step's masks.
  TrajectoryPoint snapshot() const;

 private:
  std::size_t d_, n_;
  GdminConfig cfg_;
  double eta_;
  std::size_t iter_ = 0;
  Matrix B_, A_;
  double last_loss_ = 1.0, last_loss_stderr_ = 0.0;
};

struct GdminResult {
  Trajectory trajectory;  // point t describes B(t) before its update
  Matrix A;               // optimal decoder for the final B
  Matrix B;
  /// exact_linear_mse of (A, B) on masks independent of those used to fit A.
  double final_mse = 1.0;
};

GdminResult gdmin_run(std::size_t d, double r, const GdminConfig& cfg);

}  // namespace aelab
