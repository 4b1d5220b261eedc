#include "aelab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "aelab/error.hpp"

namespace aelab {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::HaarSubsampled: return "haar_subsampled";
    case Provenance::IdentityLike: return "identity_like";
    case Provenance::GaussianInit: return "gaussian_init";
    case Provenance::Trained: return "trained";
    case Provenance::Loaded: return "loaded";
  }
  return "loaded";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "haar_subsampled") return Provenance::HaarSubsampled;
  if (s == "identity_like") return Provenance::IdentityLike;
  if (s == "gaussian_init") return Provenance::GaussianInit;
  if (s == "trained") return Provenance::Trained;
  return Provenance::Loaded;
}

EncoderMatrix::EncoderMatrix(const Matrix& rows, Provenance provenance)
    : m_(row_normalize(rows)), provenance_(provenance) {}

EncoderMatrix EncoderMatrix::haar(std::size_t n, std::size_t d, SeedSpec seed) {
  return EncoderMatrix(sample_haar_rows(n, d, seed), Provenance::HaarSubsampled);
}

EncoderMatrix EncoderMatrix::identity_like(std::size_t n, std::size_t d) {
  if (n > d) throw DimensionError("identity_like: n > d");
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return EncoderMatrix(m, Provenance::IdentityLike);
}

EncoderMatrix EncoderMatrix::gaussian(std::size_t n, std::size_t d, SeedSpec seed) {
  Rng rng(seed);
  return EncoderMatrix(gaussian_matrix(n, d, 1.0 / std::sqrt(static_cast<double>(d)), rng),
                       Provenance::GaussianInit);
}

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

Vector Mask::as_vector() const {
  Vector v(static_cast<Eigen::Index>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) v[i] = bits[i];
  return v;
}

Matrix gaussian_matrix(std::size_t n, std::size_t d, double sd, Rng& rng) {
  Matrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = sd * rng.normal();
  return g;
}

Matrix sample_haar_rows(std::size_t n, std::size_t d, SeedSpec seed) {
  if (n < 1 || d < 1) throw DimensionError("sample_haar_rows: empty shape");
  if (n > d) throw DimensionError("sample_haar_rows: n > d");
  Rng rng(seed);
  // Thin QR of a d×n Gaussian: the n orthonormal columns are the first n
  // columns of a Haar orthogonal matrix once R has a positive diagonal.
  Matrix g = gaussian_matrix(d, n, 1.0, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q.transpose();
}

Matrix row_normalize(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0) out.row(i) /= norm;
  }
  return out;
}

Mask sample_mask(std::size_t d, double p, bool require_nonzero, Rng& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("sample_mask: keep probability outside (0,1]");
  Mask mask{std::vector<std::uint8_t>(d, 1), p};
  if (p == 1.0) return mask;
  do {
    for (auto& b : mask.bits) b = rng.bernoulli(p) ? 1 : 0;
  } while (require_nonzero && d > 0 && mask.all_zero());
  return mask;
}

Mask sample_mask(std::size_t d, double p, bool require_nonzero, SeedSpec seed) {
  Rng rng(seed);
  return sample_mask(d, p, require_nonzero, rng);
}

Matrix apply_mask(const Matrix& m, const Mask& mask) {
  if (static_cast<Eigen::Index>(mask.size()) != m.cols())
    throw DimensionError("apply_mask: mask length does not match column count");
  Matrix out = m;
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    if (!mask.bits[j]) out.col(j).setZero();
  return out;
}

std::vector<double> singular_values(const Matrix& m) {
  if (m.size() == 0) return {};
  Eigen::BDCSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double operator_norm(const Matrix& m) {
  const auto s = singular_values(m);
  return s.empty() ? 0.0 : s.front();
}

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw StateError("cannot write " + path.string());
  out << m.rows() << ',' << m.cols() << '\n';
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StateError("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  long n = 0, d = 0;
  char comma = 0;
  std::istringstream header(line);
  if (!(header >> n >> comma >> d) || comma != ',' || n < 1 || d < 1)
    throw StateError(path.string() + ": expected header 'n,d'");
  Matrix m(n, d);
  for (long i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw StateError(path.string() + ": too few rows");
    std::istringstream row(line);
    std::string cell;
    for (long j = 0; j < d; ++j) {
      if (!std::getline(row, cell, ',')) throw StateError(path.string() + ": short row " + std::to_string(i));
      m(i, j) = std::stod(cell);
    }
  }
  return m;
}

}  // namespace aelab
