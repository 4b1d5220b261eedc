#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aelab/rng.hpp"

namespace aelab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Provenance { HaarSubsampled, IdentityLike, GaussianInit, Trained, Loaded };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// n×d encoder with unit-norm (or zero) rows.
class EncoderMatrix {
 public:
  EncoderMatrix() = default;
  /// Rows are normalized on construction.
  EncoderMatrix(const Matrix& rows, Provenance provenance);

  static EncoderMatrix haar(std::size_t n, std::size_t d, SeedSpec seed);
  static EncoderMatrix identity_like(std::size_t n, std::size_t d);
  /// Rows i.i.d. N(0, 1/d), then normalized.
  static EncoderMatrix gaussian(std::size_t n, std::size_t d, SeedSpec seed);

  const Matrix& matrix() const { return m_; }
  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }
  Provenance provenance() const { return provenance_; }

 private:
  Matrix m_;
  Provenance provenance_ = Provenance::Loaded;
};

struct Mask {
  std::vector<std::uint8_t> bits;
  double keep_prob = 1.0;

  std::size_t size() const { return bits.size(); }
  std::size_t count() const;
  bool all_zero() const { return count() == 0; }
  Vector as_vector() const;
};

Matrix sample_haar_rows(std::size_t n, std::size_t d, SeedSpec seed);
Matrix gaussian_matrix(std::size_t n, std::size_t d, double sd, Rng& rng);
Matrix row_normalize(const Matrix& m);

Mask sample_mask(std::size_t d, double p, bool require_nonzero, SeedSpec seed);
Mask sample_mask(std::size_t d, double p, bool require_nonzero, Rng& rng);
Matrix apply_mask(const Matrix& m, const Mask& mask);

/// Descending singular values.
std::vector<double> singular_values(const Matrix& m);
double operator_norm(const Matrix& m);

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);
Matrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace aelab
