#include "aelab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "aelab/training.hpp"

namespace aelab {

double orthogonality_defect(const Matrix& B) {
  if (B.rows() == 0) return 0.0;
  const Matrix Bh = row_normalize(B);
  const Matrix gram = Bh * Bh.transpose();
  return (gram - Matrix::Identity(B.rows(), B.rows())).norm() / std::sqrt(static_cast<double>(B.rows()));
}

double permutation_identity_score(const Matrix& B) {
  const Eigen::Index n = B.rows(), d = B.cols();
  if (n == 0 || d == 0) return 0.0;
  const Matrix mag = row_normalize(B).cwiseAbs();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(mag.size()));
  for (Eigen::Index i = 0; i < mag.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return mag.data()[a] > mag.data()[b]; });
  std::vector<bool> row_used(static_cast<std::size_t>(n)), col_used(static_cast<std::size_t>(d));
  double total = 0.0;
  Eigen::Index assigned = 0;
  for (Eigen::Index idx : order) {
    const Eigen::Index k = idx % n, j = idx / n;  // column-major storage
    if (row_used[static_cast<std::size_t>(k)] || col_used[static_cast<std::size_t>(j)]) continue;
    row_used[static_cast<std::size_t>(k)] = col_used[static_cast<std::size_t>(j)] = true;
    total += mag(k, j);
    if (++assigned == std::min(n, d)) break;
  }
  return total / static_cast<double>(n);
}

double singular_deviation(const Matrix& B) {
  double worst = 0.0;
  for (double s : singular_values(row_normalize(B))) worst = std::max(worst, std::abs(s * s - 1.0));
  return worst;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::HaarLike: return "haar_like";
    case Verdict::IdentityPermutation: return "identity_permutation";
    case Verdict::Undecided: break;
  }
  return "undecided";
}

StructureReport structure_report(const Matrix& B, const StructureThresholds& t) {
  StructureReport r;
  r.orth_defect = orthogonality_defect(B);
  r.perm_score = permutation_identity_score(B);
  if (r.perm_score > t.identity_perm_min)
    r.verdict = Verdict::IdentityPermutation;
  else if (r.orth_defect < t.haar_orth_max && r.perm_score < t.haar_perm_max)
    r.verdict = Verdict::HaarLike;
  return r;
}

SubspaceTracker::SubspaceTracker(const Matrix& B0) {
  Eigen::BDCSVD<Matrix> svd(B0, Eigen::ComputeThinU | Eigen::ComputeThinV);
  U_ = svd.matrixU();
  V_ = svd.matrixV();
}

double SubspaceTracker::drift(const Matrix& B) const {
  const Vector diag = (U_.transpose() * B * V_).diagonal();
  return operator_norm(B - U_ * diag.asDiagonal() * V_.transpose());
}

std::vector<StaircaseSegment> detect_staircase(const Trajectory& loss, const std::vector<double>& levels,
                                               double rel_tol) {
  const auto& pts = loss.points();
  std::vector<StaircaseSegment> segments;
  std::size_t from = 0;
  for (double level : levels) {
    const double band = rel_tol * std::abs(level);
    std::size_t best_start = 0, best_len = 0;
    for (std::size_t i = from; i < pts.size();) {
      if (std::abs(pts[i].loss - level) > band) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < pts.size() && std::abs(pts[j].loss - level) <= band) ++j;
      if (j - i > best_len) {
        best_start = i;
        best_len = j - i;
      }
      i = j;
    }
    if (best_len == 0) continue;
    StaircaseSegment s;
    s.level = level;
    s.points = best_len;
    s.start_iter = pts[best_start].iter;
    s.end_iter = pts[best_start + best_len - 1].iter;
    s.length = s.end_iter - s.start_iter;
    const std::size_t after = best_start + best_len;
    if (after < pts.size()) {
      s.escaped = true;
      s.escape_iter = pts[after].iter;
    }
    segments.push_back(s);
    from = after;
  }
  return segments;
}

}  // namespace aelab
