#include "aelab/models.hpp"

#include <cmath>
#include <numbers>

#include "aelab/error.hpp"
#include "aelab/io.hpp"
#include "aelab/parallel.hpp"

namespace aelab {

namespace {

constexpr double kArcsinClamp = 1.0 - 1e-12;

double sech2(double t) {
  const double th = std::tanh(t);
  return 1.0 - th * th;
}

template <typename F>
Matrix map(const Matrix& m, const F& f) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.size(); ++i) out.data()[i] = f(m.data()[i]);
  return out;
}

}  // namespace

double ParametricNonlin::operator()(double x) const { return alpha1 * x + alpha2 * std::tanh(alpha3 * x); }

double ParametricNonlin::derivative(double x) const { return alpha1 + alpha2 * alpha3 * sech2(alpha3 * x); }

std::array<double, ParametricNonlin::kParams> ParametricNonlin::param_gradient(double x) const {
  return {x, std::tanh(alpha3 * x), alpha2 * x * sech2(alpha3 * x)};
}

void ParametricNonlin::set_params(const std::array<double, kParams>& v) {
  alpha1 = v[0];
  alpha2 = v[1];
  alpha3 = v[2];
}

double TanhMixtureNonlin::operator()(double x) const {
  return x >= 0 ? gamma1 * std::tanh(eps1 * x - a1) + b1 : gamma2 * std::tanh(eps2 * x - a2) + b2;
}

double TanhMixtureNonlin::derivative(double x) const {
  return x >= 0 ? gamma1 * eps1 * sech2(eps1 * x - a1) : gamma2 * eps2 * sech2(eps2 * x - a2);
}

std::array<double, TanhMixtureNonlin::kParams> TanhMixtureNonlin::param_gradient(double x) const {
  if (x >= 0) {
    const double t = eps1 * x - a1, s = sech2(t);
    return {std::tanh(t), gamma1 * x * s, -gamma1 * s, 1.0, 0.0, 0.0, 0.0, 0.0};
  }
  const double t = eps2 * x - a2, s = sech2(t);
  return {0.0, 0.0, 0.0, 0.0, std::tanh(t), gamma2 * x * s, -gamma2 * s, 1.0};
}

void TanhMixtureNonlin::set_params(const std::array<double, kParams>& v) {
  gamma1 = v[0];
  eps1 = v[1];
  a1 = v[2];
  b1 = v[3];
  gamma2 = v[4];
  eps2 = v[5];
  a2 = v[6];
  b2 = v[7];
}

TanhMixtureNonlin TanhMixtureNonlin::antisymmetric(double gamma, double eps, double a, double b) {
  return {gamma, eps, a, b, gamma, eps, -a, -b};
}

double ClosedFormNonlin::operator()(double x) const {
  if (!fn) throw StateError("closed-form nonlinearity '" + label + "' is not bound to a function");
  return fn(x);
}

double apply(const Nonlinearity& f, double x) {
  return std::visit([x](const auto& g) { return g(x); }, f);
}

std::string architecture_name(const Autoencoder& model) {
  switch (model.index()) {
    case 0: return "linear";
    case 1: return "denoised";
    default: return "multilayer";
  }
}

const EncoderMatrix& encoder(const Autoencoder& model) {
  return std::visit([](const auto& m) -> const EncoderMatrix& { return m.B; }, model);
}

void check_dimensions(const Autoencoder& model) {
  const auto& B = encoder(model);
  const Eigen::Index n = B.rows(), d = B.cols();
  auto expect = [](const Matrix& m, Eigen::Index r, Eigen::Index c, const char* name) {
    if (m.rows() != r || m.cols() != c)
      throw DimensionError(std::string(name) + " has shape " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + ", expected " + std::to_string(r) + "x" + std::to_string(c));
  };
  if (const auto* lin = std::get_if<LinearDecoderAE>(&model)) {
    expect(lin->A, d, n, "A");
  } else if (const auto* den = std::get_if<DenoisedAE>(&model)) {
    expect(den->A, d, n, "A");
  } else {
    const auto& ml = std::get<MultilayerDecoderAE>(model);
    expect(ml.W1, d, n, "W1");
    expect(ml.W2, d, n, "W2");
    expect(ml.V1, n, d, "V1");
  }
}

Matrix sign_with_ties(const Matrix& u, Rng& rng) {
  Matrix z(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double v = u.data()[i];
    z.data()[i] = v > 0 ? 1.0 : (v < 0 ? -1.0 : rng.rademacher());
  }
  return z;
}

Vector encode(const EncoderMatrix& B, const Vector& x, SeedSpec seed) {
  if (x.size() != B.cols()) throw DimensionError("encode: input dimension does not match encoder");
  Rng rng(seed);
  return sign_with_ties(B.matrix() * x, rng);
}

MultilayerForward multilayer_forward(const MultilayerDecoderAE& m, const Matrix& z1) {
  MultilayerForward f;
  f.z1 = z1;
  f.x1 = m.W1 * z1;
  f.xh1 = map(f.x1, m.f1);
  f.u = m.merge[0].beta * (m.V1 * f.xh1) + m.merge[0].gamma * z1;
  f.z2 = map(f.u, m.g1);
  f.w = m.W2 * f.z2;
  f.x2 = m.merge[1].beta * f.xh1 + m.merge[1].gamma * f.w;
  f.v = m.merge[2].beta * f.x1 + m.merge[2].gamma * f.x2;
  f.xh2 = map(f.v, m.f2);
  return f;
}

Matrix decode_batch(const Autoencoder& model, const Matrix& z) {
  if (z.rows() != encoder(model).rows()) throw DimensionError("decode: code length does not match model");
  if (const auto* lin = std::get_if<LinearDecoderAE>(&model)) return lin->A * z;
  if (const auto* den = std::get_if<DenoisedAE>(&model)) {
    const Matrix y = den->A * z;
    return map(y, [&](double v) { return apply(den->f, v); });
  }
  return multilayer_forward(std::get<MultilayerDecoderAE>(model), z).xh2;
}

Vector decode(const Autoencoder& model, const Vector& z) { return decode_batch(model, z); }

MseEstimate mse_monte_carlo(const Autoencoder& model, const Prior& prior, std::size_t n_samples, SeedSpec seed) {
  if (n_samples < 2) throw DomainError("mse_monte_carlo: need at least two samples");
  check_dimensions(model);
  const Matrix& B = encoder(model).matrix();
  const std::size_t d = static_cast<std::size_t>(B.cols());
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<std::array<double, 2>> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t count = std::min(kChunk, n_samples - c * kChunk);
    Rng rng(derive(seed, c));
    const Matrix x = sample_matrix(prior, d, count, rng);
    const Matrix z = sign_with_ties(B * x, rng);
    const Matrix xh = decode_batch(model, z);
    double s = 0.0, s2 = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double loss = (x.col(j) - xh.col(j)).squaredNorm() / static_cast<double>(d);
      s += loss;
      s2 += loss * loss;
    }
    partial[c] = {s, s2};
  });
  double s = 0.0, s2 = 0.0;
  for (const auto& v : partial) {
    s += v[0];
    s2 += v[1];
  }
  const double n = static_cast<double>(n_samples);
  const double mean = s / n;
  const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

MaskedTerms masked_terms(const Matrix& B, const Mask& mask) {
  if (static_cast<Eigen::Index>(mask.size()) != B.cols())
    throw DimensionError("masked_terms: mask length does not match encoder");
  MaskedTerms t;
  t.B_hat = B.array().rowwise() * mask.as_vector().transpose().array();
  t.norms = t.B_hat.rowwise().norm();
  for (Eigen::Index k = 0; k < t.B_hat.rows(); ++k)
    if (t.norms[k] > 0) t.B_hat.row(k) /= t.norms[k];
  t.gram = t.B_hat * t.B_hat.transpose();
  t.K = t.gram.unaryExpr([](double g) {
    return (2.0 / std::numbers::pi) * std::asin(std::clamp(g, -kArcsinClamp, kArcsinClamp));
  });
  t.K.diagonal().setOnes();
  return t;
}

double masked_linear_mse(const Matrix& A, const MaskedTerms& terms, double p) {
  if (A.rows() != terms.B_hat.cols() || A.cols() != terms.B_hat.rows())
    throw DimensionError("masked_linear_mse: A must be d × n");
  const double d = static_cast<double>(A.rows());
  const double c = std::sqrt(2.0 / std::numbers::pi) / std::sqrt(p);
  const double quad = ((A.transpose() * A).array() * terms.K.array()).sum();
  const double cross = (terms.B_hat.array() * A.transpose().array()).sum();
  return 1.0 + (quad - 2.0 * c * cross) / d;
}

std::vector<Mask> sample_masks(std::size_t d, double p, std::size_t n_masks, SeedSpec seed) {
  if (p == 1.0) return {Mask{std::vector<std::uint8_t>(d, 1), 1.0}};
  if (n_masks < 1) throw DomainError("sample_masks: need at least one mask");
  Rng rng(seed);
  std::vector<Mask> masks;
  masks.reserve(n_masks);
  for (std::size_t i = 0; i < n_masks; ++i) masks.push_back(sample_mask(d, p, true, rng));
  return masks;
}

double exact_linear_mse(const Matrix& A, const Matrix& B, double p, const std::vector<Mask>& masks) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("exact_linear_mse: p outside (0,1]");
  if (masks.empty()) throw DomainError("exact_linear_mse: empty mask set");
  double acc = 0.0;
  for (const auto& m : masks) acc += masked_linear_mse(A, masked_terms(B, m), p);
  return acc / static_cast<double>(masks.size());
}

double exact_linear_mse(const Matrix& A, const EncoderMatrix& B, double p, std::size_t n_masks, SeedSpec seed) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("exact_linear_mse: p outside (0,1]");
  return exact_linear_mse(A, B.matrix(), p, sample_masks(static_cast<std::size_t>(B.cols()), p, n_masks, seed));
}

namespace {

template <typename NL>
void put_params(KeyValues& kv, const std::string& prefix, const NL& f) {
  const auto v = f.params();
  for (std::size_t i = 0; i < v.size(); ++i) kv.emplace_back(prefix + ".theta" + std::to_string(i), format_real(v[i]));
}

template <typename NL>
NL get_params(const KeyValues& kv, const std::string& prefix) {
  NL f;
  auto v = f.params();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto* s = find_value(kv, prefix + ".theta" + std::to_string(i));
    if (!s) throw StateError("checkpoint: missing " + prefix + ".theta" + std::to_string(i));
    v[i] = std::stod(*s);
  }
  f.set_params(v);
  return f;
}

std::string require(const KeyValues& kv, const std::string& key) {
  const auto* s = find_value(kv, key);
  if (!s) throw StateError("checkpoint: missing key '" + key + "'");
  return *s;
}

}  // namespace

void save_checkpoint(const Autoencoder& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto& B = encoder(model);
  write_matrix_csv(B.matrix(), dir / "B.csv");
  KeyValues kv{{"architecture", architecture_name(model)}, {"provenance", to_string(B.provenance())}};
  if (const auto* lin = std::get_if<LinearDecoderAE>(&model)) {
    write_matrix_csv(lin->A, dir / "A.csv");
  } else if (const auto* den = std::get_if<DenoisedAE>(&model)) {
    write_matrix_csv(den->A, dir / "A.csv");
    if (const auto* pf = std::get_if<ParametricNonlin>(&den->f)) {
      kv.emplace_back("f.kind", "parametric");
      put_params(kv, "f", *pf);
    } else if (const auto* tm = std::get_if<TanhMixtureNonlin>(&den->f)) {
      kv.emplace_back("f.kind", "tanh_mixture");
      put_params(kv, "f", *tm);
    } else {
      kv.emplace_back("f.kind", "closed_form");
      kv.emplace_back("f.label", std::get<ClosedFormNonlin>(den->f).label);
    }
  } else {
    const auto& ml = std::get<MultilayerDecoderAE>(model);
    write_matrix_csv(ml.W1, dir / "W1.csv");
    write_matrix_csv(ml.W2, dir / "W2.csv");
    write_matrix_csv(ml.V1, dir / "V1.csv");
    put_params(kv, "f1", ml.f1);
    put_params(kv, "f2", ml.f2);
    put_params(kv, "g1", ml.g1);
    for (std::size_t i = 0; i < 3; ++i) {
      kv.emplace_back("merge" + std::to_string(i + 1) + ".beta", format_real(ml.merge[i].beta));
      kv.emplace_back("merge" + std::to_string(i + 1) + ".gamma", format_real(ml.merge[i].gamma));
    }
  }
  write_key_values(kv, dir / "model.txt", "aelab checkpoint");
}

Autoencoder load_checkpoint(const std::filesystem::path& dir) {
  const KeyValues kv = read_key_values(dir / "model.txt");
  const std::string arch = require(kv, "architecture");
  const EncoderMatrix B(read_matrix_csv(dir / "B.csv"), provenance_from_string(require(kv, "provenance")));
  Autoencoder model;
  if (arch == "linear") {
    model = LinearDecoderAE{B, read_matrix_csv(dir / "A.csv")};
  } else if (arch == "denoised") {
    DenoisedAE den{B, read_matrix_csv(dir / "A.csv"), ParametricNonlin{}};
    const std::string kind = require(kv, "f.kind");
    if (kind == "parametric") {
      den.f = get_params<ParametricNonlin>(kv, "f");
    } else if (kind == "tanh_mixture") {
      den.f = get_params<TanhMixtureNonlin>(kv, "f");
    } else if (kind == "closed_form") {
      den.f = ClosedFormNonlin{{}, require(kv, "f.label")};
    } else {
      throw StateError("checkpoint: unknown nonlinearity kind '" + kind + "'");
    }
    model = std::move(den);
  } else if (arch == "multilayer") {
    MultilayerDecoderAE ml;
    ml.B = B;
    ml.W1 = read_matrix_csv(dir / "W1.csv");
    ml.W2 = read_matrix_csv(dir / "W2.csv");
    ml.V1 = read_matrix_csv(dir / "V1.csv");
    ml.f1 = get_params<ParametricNonlin>(kv, "f1");
    ml.f2 = get_params<ParametricNonlin>(kv, "f2");
    ml.g1 = get_params<ParametricNonlin>(kv, "g1");
    for (std::size_t i = 0; i < 3; ++i) {
      ml.merge[i].beta = std::stod(require(kv, "merge" + std::to_string(i + 1) + ".beta"));
      ml.merge[i].gamma = std::stod(require(kv, "merge" + std::to_string(i + 1) + ".gamma"));
    }
    model = std::move(ml);
  } else {
    throw StateError("checkpoint: unknown architecture '" + arch + "'");
  }
  check_dimensions(model);
  return model;
}

}  // namespace aelab
