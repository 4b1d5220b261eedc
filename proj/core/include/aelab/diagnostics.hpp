#pragma once

#include <string>
#include <vector>

#include "aelab/linalg.hpp"

namespace aelab {

class Trajectory;

/// ‖B̂B̂ᵀ − I‖_F / √n.
double orthogonality_defect(const Matrix& B);
/// Mean of the entries picked by a greedy one-to-one row/column assignment on |B̂|;
/// equals 1 exactly for signed row-subpermutations.
double permutation_identity_score(const Matrix& B);
/// ‖SSᵀ − I‖_op = max_i |σ_i² − 1|.
double singular_deviation(const Matrix& B);

enum class Verdict { HaarLike, IdentityPermutation, Undecided };
std::string to_string(Verdict v);

struct StructureThresholds {
  double haar_orth_max = 0.1;
  double haar_perm_max = 0.5;
  double identity_perm_min = 0.9;
};

struct StructureReport {
  double orth_defect = 0.0;
  double perm_score = 0.0;
  Verdict verdict = Verdict::Undecided;
};

StructureReport structure_report(const Matrix& B, const StructureThresholds& thresholds = {});

/// Residual of B(t) outside the singular bases of B(0): ‖B(t) − U·diag(UᵀB(t)V)·Vᵀ‖_op.
class SubspaceTracker {
 public:
  explicit SubspaceTracker(const Matrix& B0);
  double drift(const Matrix& B) const;

 private:
  Matrix U_, V_;
};

struct StaircaseSegment {
  double level = 0.0;
  std::size_t start_iter = 0;
  std::size_t end_iter = 0;      // last point inside the band
  std::size_t points = 0;
  std::size_t length = 0;        // end_iter − start_iter
  bool escaped = false;
  std::size_t escape_iter = 0;   // first recorded iteration after the plateau
};

/// For each level (descending), the longest run of consecutive points within
/// rel_tol·level of it, searched after the previous segment; levels with no
/// such run are skipped.
std::vector<StaircaseSegment> detect_staircase(const Trajectory& loss, const std::vector<double>& levels,
                                               double rel_tol);

}  // namespace aelab
