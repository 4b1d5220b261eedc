#include "aelab/training.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aelab/diagnostics.hpp"
#include "aelab/error.hpp"
#include "aelab/parallel.hpp"

namespace aelab {

namespace {

constexpr double kArcsinDerivClamp = 1.0 - 1e-9;

const char* const kCoreColumns[] = {"ssT_dev", "subspace_drift", "orth_defect", "perm_score"};

template <typename F>
Matrix map(const Matrix& m, const F& f) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.size(); ++i) out.data()[i] = f(m.data()[i]);
  return out;
}

double arcsin_derivative(double x) {
  const double c = std::clamp(x, -kArcsinDerivClamp, kArcsinDerivClamp);
  return 1.0 / std::sqrt(1.0 - c * c);
}

// Derivative of a closed-form map by central differences.
double numeric_derivative(const ClosedFormNonlin& f, double x) {
  const double h = 1e-5 * std::max(1.0, std::abs(x));
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double nonlin_derivative(const Nonlinearity& f, double x) {
  return std::visit(
      [&](const auto& g) -> double {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, ClosedFormNonlin>)
          return numeric_derivative(g, x);
        else
          return g.derivative(x);
      },
      f);
}

template <typename NL>
std::array<double, NL::kParams> param_grad_sum(const NL& f, const Matrix& x, const Matrix& upstream) {
  std::array<double, NL::kParams> g{};
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const auto pg = f.param_gradient(x.data()[i]);
    for (std::size_t k = 0; k < NL::kParams; ++k) g[k] += upstream.data()[i] * pg[k];
  }
  return g;
}

template <typename NL>
void sgd_update(NL& f, const std::array<double, NL::kParams>& g, double lr) {
  auto p = f.params();
  for (std::size_t k = 0; k < NL::kParams; ++k) p[k] -= lr * g[k];
  f.set_params(p);
}

// Pulls a gradient in B̂ back to the raw rows of B̂ = B/‖B‖.
Matrix normalize_backward(const Matrix& raw, const Matrix& hat, const Matrix& grad_hat) {
  Matrix g(raw.rows(), raw.cols());
  for (Eigen::Index k = 0; k < raw.rows(); ++k) {
    const double norm = raw.row(k).norm();
    if (norm == 0.0) {
      g.row(k).setZero();
      continue;
    }
    const double radial = grad_hat.row(k).dot(hat.row(k));
    g.row(k) = (grad_hat.row(k) - radial * hat.row(k)) / norm;
  }
  return g;
}

struct EvalSet {
  Matrix x;
  Matrix z_ties;  // Rademacher draws used where Bx is exactly zero
};

MseEstimate evaluate(const Autoencoder& model, const EvalSet& eval) {
  const Matrix& B = encoder(model).matrix();
  const Matrix u = B * eval.x;
  Matrix z(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double v = u.data()[i];
    z.data()[i] = v > 0 ? 1.0 : (v < 0 ? -1.0 : eval.z_ties.data()[i]);
  }
  const Matrix xh = decode_batch(model, z);
  const double d = static_cast<double>(eval.x.rows());
  const Eigen::Index n = eval.x.cols();
  const Vector per = (eval.x - xh).colwise().squaredNorm().transpose() / d;
  const double mean = per.mean();
  const double var = n > 1 ? (per.array() - mean).square().sum() / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

void add_structure(TrajectoryPoint& pt, const Matrix& B, const SubspaceTracker& tracker) {
  pt.diagnostics.emplace_back("ssT_dev", singular_deviation(B));
  pt.diagnostics.emplace_back("subspace_drift", tracker.drift(row_normalize(B)));
  pt.diagnostics.emplace_back("orth_defect", orthogonality_defect(B));
  pt.diagnostics.emplace_back("perm_score", permutation_identity_score(B));
}

// ‖B̂Â − I‖_F with Â = A rescaled so that tr(B̂Â) = n.
double decoder_alignment(const Matrix& Bh, const Matrix& A) {
  const Matrix prod = Bh * A;
  const double tr = prod.trace();
  const double n = static_cast<double>(Bh.rows());
  const Matrix scaled = tr != 0.0 ? Matrix(prod * (n / tr)) : prod;
  return (scaled - Matrix::Identity(Bh.rows(), Bh.rows())).norm();
}

double lr_at(const SgdConfig& cfg, std::size_t t) {
  if (cfg.n_iters == 0) return cfg.learning_rate;
  const double frac = static_cast<double>(t) / static_cast<double>(cfg.n_iters);
  return cfg.learning_rate * (1.0 - (1.0 - cfg.final_lr_fraction) * frac);
}

// Mutable training state shared by the single-decoder architectures.
struct SingleState {
  Matrix Braw, A;
  Nonlinearity f;
  bool denoised;
};

// One step for the linear or denoised model; returns the training-batch loss.
void single_step(SingleState& s, const Matrix& X, Rng& rng, const SgdConfig& cfg, double lr) {
  const double N = static_cast<double>(X.cols());
  const Matrix Bh = row_normalize(s.Braw);
  const Matrix U = Bh * X;
  const Matrix Z = sign_with_ties(U, rng);
  const Matrix Y = s.A * Z;
  Matrix Xh = Y;
  if (s.denoised) Xh = map(Y, [&](double v) { return aelab::apply(s.f, v); });
  const Matrix dXh = 2.0 * (Xh - X) / N;
  Matrix dY = dXh;
  if (s.denoised) dY = dXh.cwiseProduct(map(Y, [&](double v) { return nonlin_derivative(s.f, v); }));

  const bool train_enc = cfg.trainable.encoder && cfg.encoder_lr_scale != 0.0;
  Matrix dBraw;
  if (train_enc) {
    const Matrix dZ = s.A.transpose() * dY;
    const Matrix dU = dZ.cwiseProduct(map(U, [&](double v) { return straight_through_derivative(v, cfg.tau); }));
    dBraw = normalize_backward(s.Braw, Bh, dU * X.transpose());
  }
  if (s.denoised && cfg.trainable.nonlinearity) {
    std::visit(
        [&](auto& g) {
          using T = std::decay_t<decltype(g)>;
          if constexpr (!std::is_same_v<T, ClosedFormNonlin>)
            sgd_update(g, param_grad_sum(g, Y, dXh), lr * cfg.nonlin_lr_scale);
        },
        s.f);
  }
  if (cfg.trainable.decoder) s.A -= lr * (dY * Z.transpose());
  if (train_enc) s.Braw -= lr * cfg.encoder_lr_scale * dBraw;
}

struct MultiState {
  Matrix Braw;
  MultilayerDecoderAE m;
};

void multi_step(MultiState& s, const Matrix& X, Rng& rng, const SgdConfig& cfg, double lr) {
  auto& m = s.m;
  const double N = static_cast<double>(X.cols());
  const Matrix Bh = row_normalize(s.Braw);
  const Matrix U = Bh * X;
  const Matrix Z = sign_with_ties(U, rng);
  const MultilayerForward f = multilayer_forward(m, Z);
  const auto& [b1, c1] = m.merge[0];
  const auto& [b2, c2] = m.merge[1];
  const auto& [b3, c3] = m.merge[2];

  const Matrix D = 2.0 * (f.xh2 - X) / N;
  const Matrix dv = D.cwiseProduct(map(f.v, [&](double t) { return m.f2.derivative(t); }));
  const Matrix dx2 = c3 * dv;
  Matrix dxh1 = b2 * dx2;
  const Matrix dw = c2 * dx2;
  const Matrix dz2 = m.W2.transpose() * dw;
  const Matrix du = dz2.cwiseProduct(map(f.u, [&](double t) { return m.g1.derivative(t); }));
  const Matrix V1xh1 = m.V1 * f.xh1;
  dxh1 += b1 * (m.V1.transpose() * du);
  const Matrix dx1 = b3 * dv + dxh1.cwiseProduct(map(f.x1, [&](double t) { return m.f1.derivative(t); }));

  const bool train_enc = cfg.trainable.encoder && cfg.encoder_lr_scale != 0.0;
  Matrix dBraw;
  if (train_enc) {
    const Matrix dz1 = m.W1.transpose() * dx1 + c1 * du;
    const Matrix dU = dz1.cwiseProduct(map(U, [&](double t) { return straight_through_derivative(t, cfg.tau); }));
    dBraw = normalize_backward(s.Braw, Bh, dU * X.transpose());
  }
  if (cfg.trainable.nonlinearity) {
    const auto g2 = param_grad_sum(m.f2, f.v, D);
    const auto gg = param_grad_sum(m.g1, f.u, dz2);
    const auto g1 = param_grad_sum(m.f1, f.x1, dxh1);
    const double nl = lr * cfg.nonlin_lr_scale;
    sgd_update(m.f2, g2, nl);
    sgd_update(m.g1, gg, nl);
    sgd_update(m.f1, g1, nl);
  }
  if (cfg.trainable.merges) {
    const double db3 = dv.cwiseProduct(f.x1).sum(), dc3 = dv.cwiseProduct(f.x2).sum();
    const double db2 = dx2.cwiseProduct(f.xh1).sum(), dc2 = dx2.cwiseProduct(f.w).sum();
    const double db1 = du.cwiseProduct(V1xh1).sum(), dc1 = du.cwiseProduct(Z).sum();
    m.merge[2].beta -= lr * db3;
    m.merge[2].gamma -= lr * dc3;
    m.merge[1].beta -= lr * db2;
    m.merge[1].gamma -= lr * dc2;
    m.merge[0].beta -= lr * db1;
    m.merge[0].gamma -= lr * dc1;
  }
  if (cfg.trainable.decoder) {
    const Matrix dW2 = dw * f.z2.transpose();
    const Matrix dV1 = b1 * (du * f.xh1.transpose());
    const Matrix dW1 = dx1 * Z.transpose();
    m.W2 -= lr * dW2;
    m.V1 -= lr * dV1;
    m.W1 -= lr * dW1;
  }
  if (train_enc) s.Braw -= lr * cfg.encoder_lr_scale * dBraw;
}

}  // namespace

double TrajectoryPoint::diagnostic(const std::string& name) const {
  for (const auto& [k, v] : diagnostics)
    if (k == name) return v;
  throw DomainError("trajectory point has no diagnostic '" + name + "'");
}

void Trajectory::append(TrajectoryPoint point) {
  if (!points_.empty() && point.iter <= points_.back().iter)
    throw StateError("trajectory iterations must strictly increase");
  points_.push_back(std::move(point));
}

CsvTable Trajectory::to_csv() const {
  CsvTable t;
  t.header = {"iter", "loss", "loss_stderr"};
  for (const char* c : kCoreColumns) t.header.emplace_back(c);
  for (const auto& pt : points_)
    for (const auto& [k, v] : pt.diagnostics)
      if (std::find(t.header.begin(), t.header.end(), k) == t.header.end()) t.header.push_back(k);
  for (const auto& pt : points_) {
    std::vector<Cell> row{static_cast<long long>(pt.iter), pt.loss, pt.loss_stderr};
    for (std::size_t c = 3; c < t.header.size(); ++c) {
      Cell cell = std::string{};
      for (const auto& [k, v] : pt.diagnostics)
        if (k == t.header[c]) cell = v;
      row.push_back(cell);
    }
    t.add(std::move(row));
  }
  return t;
}

double straight_through(double x, double tau) { return std::tanh(x / tau); }

double straight_through_derivative(double x, double tau) {
  const double t = std::tanh(x / tau);
  return (1.0 - t * t) / tau;
}

LinearDecoderAE init_linear(std::size_t d, std::size_t n, SeedSpec seed) {
  Rng rng(derive(seed, 1));
  Matrix A = gaussian_matrix(d, n, 1.0 / std::sqrt(static_cast<double>(n)), rng);
  return {EncoderMatrix::gaussian(n, d, derive(seed, 0)), std::move(A)};
}

DenoisedAE init_denoised(std::size_t d, std::size_t n, SeedSpec seed, bool tanh_mixture) {
  auto lin = init_linear(d, n, seed);
  Nonlinearity f = ParametricNonlin{};
  if (tanh_mixture) f = TanhMixtureNonlin::antisymmetric(1.0, 1.0, 0.0, 0.0);
  return {std::move(lin.B), std::move(lin.A), std::move(f)};
}

MultilayerDecoderAE init_multilayer(const EncoderMatrix& B) {
  MultilayerDecoderAE m;
  m.B = B;
  m.W1 = B.matrix().transpose();
  m.W2 = B.matrix().transpose();
  m.V1 = B.matrix();
  m.merge[0] = {1.0, 0.0};
  m.merge[1] = {1.0, 0.1};
  m.merge[2] = {0.0, 1.0};
  return m;
}

SgdResult sgd_train(Autoencoder model, const Prior& prior, const SgdConfig& cfg) {
  if (!(cfg.learning_rate >= 0.0)) throw DomainError("sgd_train: learning_rate must be non-negative");
  if (!(cfg.tau > 0.0)) throw DomainError("sgd_train: tau must be positive");
  if (cfg.batch_size == 0) throw DomainError("sgd_train: batch_size must be positive");
  if (cfg.eval_every == 0) throw DomainError("sgd_train: eval_every must be positive");
  if (cfg.eval_samples < 2) throw DomainError("sgd_train: eval_samples must be at least 2");
  check_dimensions(model);
  const EncoderMatrix B0 = encoder(model);
  const std::size_t d = static_cast<std::size_t>(B0.cols());

  EvalSet eval;
  {
    Rng rng(derive(cfg.seed, 0));
    eval.x = sample_matrix(prior, d, cfg.eval_samples, rng);
    eval.z_ties = map(Matrix::Zero(B0.rows(), eval.x.cols()), [&](double) { return rng.rademacher(); });
  }
  const SubspaceTracker tracker(B0.matrix());

  SgdResult result;
  const bool multi = std::holds_alternative<MultilayerDecoderAE>(model);
  SingleState single;
  MultiState ml;
  if (multi) {
    ml.m = std::get<MultilayerDecoderAE>(model);
    ml.Braw = B0.matrix();
  } else if (const auto* lin = std::get_if<LinearDecoderAE>(&model)) {
    single = {B0.matrix(), lin->A, ParametricNonlin::identity(), false};
  } else {
    const auto& den = std::get<DenoisedAE>(model);
    single = {B0.matrix(), den.A, den.f, true};
  }
  bool encoder_moved = false;

  auto current = [&]() -> Autoencoder {
    EncoderMatrix B = encoder_moved ? EncoderMatrix(multi ? ml.Braw : single.Braw, Provenance::Trained) : B0;
    if (multi) {
      auto m = ml.m;
      m.B = std::move(B);
      return m;
    }
    if (!single.denoised) return LinearDecoderAE{std::move(B), single.A};
    return DenoisedAE{std::move(B), single.A, single.f};
  };

  auto record = [&](std::size_t iter) -> bool {
    const Autoencoder now = current();
    const MseEstimate e = evaluate(now, eval);
    TrajectoryPoint pt{iter, e.estimate, e.std_error, {}};
    const Matrix& B = encoder(now).matrix();
    add_structure(pt, B, tracker);
    if (!multi) {
      const Matrix gram = B * B.transpose();
      pt.diagnostics.emplace_back("bbt_dev_fro", (gram - Matrix::Identity(B.rows(), B.rows())).norm());
      pt.diagnostics.emplace_back("ba_dev_fro", decoder_alignment(B, single.A));
    }
    result.trajectory.append(std::move(pt));
    if (!std::isfinite(e.estimate)) {
      result.aborted = true;
      result.abort_reason = "non-finite loss at iteration " + std::to_string(iter);
      return false;
    }
    return true;
  };

  const bool enc_updates = cfg.trainable.encoder && cfg.encoder_lr_scale != 0.0 && cfg.learning_rate != 0.0;
  bool ok = record(0);
  for (std::size_t t = 0; ok && t < cfg.n_iters; ++t) {
    const double lr = lr_at(cfg, t);
    if (lr != 0.0) {
      Rng rng(derive(cfg.seed, t + 1));
      const Matrix X = sample_matrix(prior, d, cfg.batch_size, rng);
      if (multi)
        multi_step(ml, X, rng, cfg, lr);
      else
        single_step(single, X, rng, cfg, lr);
      encoder_moved = encoder_moved || enc_updates;
    }
    const std::size_t iter = t + 1;
    if (iter % cfg.eval_every == 0 || iter == cfg.n_iters) ok = record(iter);
  }
  result.model = current();
  return result;
}

namespace {

struct MaskAverages {
  Matrix K;      // mean of K_m
  Matrix C;      // mean of B̂_m
  std::vector<MaskedTerms> terms;
};

MaskAverages average_terms(const Matrix& B, const std::vector<Mask>& masks) {
  MaskAverages avg;
  avg.terms.resize(masks.size());
  parallel_for(masks.size(), [&](std::size_t i) { avg.terms[i] = masked_terms(B, masks[i]); });
  avg.K = Matrix::Zero(B.rows(), B.rows());
  avg.C = Matrix::Zero(B.rows(), B.cols());
  for (const auto& t : avg.terms) {
    avg.K += t.K;
    avg.C += t.B_hat;
  }
  avg.K /= static_cast<double>(masks.size());
  avg.C /= static_cast<double>(masks.size());
  return avg;
}

Matrix solve_decoder(const MaskAverages& avg, double p) {
  const double c = std::sqrt(2.0 / std::numbers::pi) / std::sqrt(p);
  const Eigen::Index n = avg.K.rows();
  for (double ridge : {0.0, 1e-10, 1e-8}) {
    Eigen::LDLT<Matrix> ldlt(avg.K + ridge * Matrix::Identity(n, n));
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) continue;
    const Vector dvec = ldlt.vectorD();
    if (dvec.minCoeff() <= 1e-14 * dvec.maxCoeff()) continue;
    Matrix At = ldlt.solve(c * avg.C);
    if (At.allFinite()) return At.transpose();
  }
  throw NumericalError("optimal_A: averaged arcsin Gram matrix is singular after regularization");
}

Matrix gradient_from_terms(const Matrix& A, const std::vector<MaskedTerms>& terms,
                           const std::vector<Mask>& masks, double p) {
  const double d = static_cast<double>(A.rows());
  const double c = std::sqrt(2.0 / std::numbers::pi) / std::sqrt(p);
  const Matrix GA = A.transpose() * A;
  const Eigen::Index n = GA.rows();
  std::vector<Matrix> parts(terms.size());
  parallel_for(terms.size(), [&](std::size_t i) {
    const MaskedTerms& t = terms[i];
    Matrix M(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) M(k, j) = k == j ? 0.0 : GA(k, j) * arcsin_derivative(t.gram(k, j));
    const Matrix V = -2.0 * c * A.transpose() + (4.0 / std::numbers::pi) * (M * t.B_hat);
    const Vector m = masks[i].as_vector();
    Matrix g = Matrix::Zero(n, A.rows());
    for (Eigen::Index k = 0; k < n; ++k) {
      if (t.norms[k] == 0.0) continue;
      const double radial = V.row(k).dot(t.B_hat.row(k));
      g.row(k) = ((V.row(k) - radial * t.B_hat.row(k)) / t.norms[k]).cwiseProduct(m.transpose());
    }
    parts[i] = std::move(g);
  });
  Matrix total = Matrix::Zero(n, A.rows());
  for (const auto& g : parts) total += g;
  return total / (d * static_cast<double>(terms.size()));
}

void check_p(double p, const char* who) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError(std::string(who) + ": p must lie in (0, 1]");
}

}  // namespace

Matrix optimal_A(const Matrix& B, double p, const std::vector<Mask>& masks) {
  check_p(p, "optimal_A");
  if (masks.empty()) throw DomainError("optimal_A: need at least one mask");
  return solve_decoder(average_terms(B, masks), p);
}

Matrix optimal_A(const EncoderMatrix& B, double p, std::size_t n_masks, SeedSpec seed) {
  return optimal_A(B.matrix(), p, sample_masks(static_cast<std::size_t>(B.cols()), p, n_masks, seed));
}

Matrix analytic_gradient(const Matrix& A, const Matrix& B, double p, const std::vector<Mask>& masks) {
  check_p(p, "analytic_gradient");
  if (masks.empty()) throw DomainError("analytic_gradient: need at least one mask");
  if (A.rows() != B.cols() || A.cols() != B.rows()) throw DimensionError("analytic_gradient: A must be d × n");
  std::vector<MaskedTerms> terms;
  terms.reserve(masks.size());
  for (const auto& m : masks) terms.push_back(masked_terms(B, m));
  return gradient_from_terms(A, terms, masks, p);
}

GdminRunner::GdminRunner(std::size_t d, double r, const GdminConfig& cfg) : d_(d), cfg_(cfg) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("gdmin_run: r must lie in (0, 1]");
  check_p(cfg.p, "gdmin_run");
  if (cfg.eta < 0.0) throw DomainError("gdmin_run: eta must be positive");
  if (cfg.noise_sigma < 0.0) throw DomainError("gdmin_run: noise_sigma must be non-negative");
  n_ = static_cast<std::size_t>(std::lround(r * static_cast<double>(d)));
  if (n_ == 0) throw DomainError("gdmin_run: r·d rounds to zero rows");
  eta_ = cfg.eta > 0.0 ? cfg.eta : 0.5 / std::sqrt(static_cast<double>(d));
  B_ = EncoderMatrix::gaussian(n_, d_, derive(cfg.seed, 0)).matrix();
  A_ = Matrix::Zero(static_cast<Eigen::Index>(d_), static_cast<Eigen::Index>(n_));
}

void GdminRunner::step() {
  const auto masks = sample_masks(d_, cfg_.p, cfg_.n_masks, derive(derive(cfg_.seed, 1), iter_));
  const MaskAverages avg = average_terms(B_, masks);
  A_ = solve_decoder(avg, cfg_.p);
  double s = 0.0, s2 = 0.0;
  for (const auto& t : avg.terms) {
    const double v = masked_linear_mse(A_, t, cfg_.p);
    s += v;
    s2 += v * v;
  }
  const double m = static_cast<double>(avg.terms.size());
  last_loss_ = s / m;
  last_loss_stderr_ = m > 1 ? std::sqrt(std::max(0.0, (s2 - m * last_loss_ * last_loss_) / (m - 1.0)) / m) : 0.0;

  Matrix grad = static_cast<double>(d_) * gradient_from_terms(A_, avg.terms, masks, cfg_.p);
  if (cfg_.noise_sigma > 0.0) {
    Rng rng(derive(derive(cfg_.seed, 2), iter_));
    grad += gaussian_matrix(n_, d_, cfg_.noise_sigma, rng);
  }
  Matrix next = row_normalize(B_ - eta_ * grad);
  if (!next.allFinite() || !A_.allFinite() || !std::isfinite(last_loss_))
    throw NumericalError("gdmin_run: non-finite entries at step " + std::to_string(iter_));
  B_ = std::move(next);
  ++iter_;
}

TrajectoryPoint GdminRunner::snapshot() const {
  TrajectoryPoint pt{iter_, last_loss_, last_loss_stderr_, {}};
  return pt;
}

GdminResult gdmin_run(std::size_t d, double r, const GdminConfig& cfg) {
  if (cfg.record_every == 0) throw DomainError("gdmin_run: record_every must be positive");
  GdminRunner runner(d, r, cfg);
  const SubspaceTracker tracker(runner.B());
  GdminResult result;
  for (std::size_t t = 0; t < cfg.n_steps; ++t) {
    const Matrix before = runner.B();
    runner.step();
    if ((t + 1) % cfg.record_every != 0 && t + 1 != cfg.n_steps) continue;
    TrajectoryPoint pt = runner.snapshot();
    pt.iter = t;
    add_structure(pt, before, tracker);
    result.trajectory.append(std::move(pt));
  }
  result.B = runner.B();
  const std::size_t masks = std::max<std::size_t>(cfg.n_masks, 1);
  result.A = optimal_A(result.B, cfg.p, sample_masks(d, cfg.p, masks, derive(cfg.seed, 3)));
  result.final_mse = exact_linear_mse(result.A, result.B, cfg.p, sample_masks(d, cfg.p, 4 * masks, derive(cfg.seed, 4)));
  return result;
}

}  // namespace aelab
