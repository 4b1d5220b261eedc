#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aelab/config.hpp"
#include "aelab/denoisers.hpp"
#include "aelab/diagnostics.hpp"
#include "aelab/error.hpp"
#include "aelab/experiments.hpp"
#include "aelab/io.hpp"
#include "aelab/se_params.hpp"
#include "aelab/training.hpp"

using namespace aelab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("aelab_exp_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Trajectory synthetic(const std::vector<std::pair<std::size_t, double>>& runs) {
  Trajectory t;
  std::size_t it = 0;
  for (auto [count, level] : runs)
    for (std::size_t i = 0; i < count; ++i, ++it) t.append({it, level, 0.0, {}});
  return t;
}

}  // namespace

TEST(OrthogonalityDefect, Examples) {
  EXPECT_LT(orthogonality_defect(EncoderMatrix::haar(20, 40, {1, 0}).matrix()), 1e-8);
  Matrix twin(2, 3);
  twin << 1, 2, 2, 1, 2, 2;
  EXPECT_NEAR(orthogonality_defect(twin), 1.0, 1e-14);
}

TEST(PermutationIdentityScore, Examples) {
  Matrix perm = Matrix::Zero(4, 6);
  perm(0, 3) = -1;
  perm(1, 0) = 1;
  perm(2, 5) = 1;
  perm(3, 1) = -1;
  EXPECT_DOUBLE_EQ(permutation_identity_score(perm), 1.0);
  Matrix dup = Matrix::Identity(4, 4);
  dup.row(3) = dup.row(2);
  EXPECT_LT(permutation_identity_score(dup), 1.0);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s)
    worst = std::max(worst, permutation_identity_score(EncoderMatrix::haar(200, 200, {s, 5}).matrix()));
  EXPECT_LE(worst, 0.3);
}

TEST(StructureReport, VerdictThresholds) {
  EXPECT_EQ(structure_report(EncoderMatrix::haar(50, 50, {2, 0}).matrix()).verdict, Verdict::HaarLike);
  EXPECT_EQ(structure_report(Matrix::Identity(6, 6)).verdict, Verdict::IdentityPermutation);
  Matrix twin(2, 3);
  twin << 1, 2, 2, 1, 2, 2;
  EXPECT_EQ(structure_report(twin).verdict, Verdict::Undecided);
  StructureThresholds strict;
  strict.identity_perm_min = 1.1;
  EXPECT_EQ(structure_report(Matrix::Identity(6, 6), strict).verdict, Verdict::Undecided);
  EXPECT_EQ(to_string(Verdict::HaarLike), "haar_like");
  EXPECT_EQ(to_string(Verdict::IdentityPermutation), "identity_permutation");
}

TEST(SingularDeviationAndSubspaceDrift, Basics) {
  const Matrix B0 = EncoderMatrix::gaussian(5, 12, {3, 0}).matrix();
  EXPECT_LT(singular_deviation(EncoderMatrix::haar(5, 12, {4, 0}).matrix()), 1e-12);
  const SubspaceTracker tr(B0);
  EXPECT_LT(tr.drift(B0), 1e-12);
  Eigen::JacobiSVD<Matrix> svd(B0, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector s = svd.singularValues();
  s[0] *= 3.0;
  EXPECT_LT(tr.drift(svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose()), 1e-12);
  EXPECT_GT(tr.drift(EncoderMatrix::haar(5, 12, {5, 0}).matrix()), 0.1);
}

TEST(DetectStaircase, TwoPlateaus) {
  const Trajectory t = synthetic({{1000, 0.36}, {1000, 0.20}});
  const auto segs = detect_staircase(t, {0.3634, 0.2}, 0.05);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[0].start_iter, 0u);
  EXPECT_EQ(segs[0].end_iter, 999u);
  EXPECT_TRUE(segs[0].escaped);
  EXPECT_EQ(segs[0].escape_iter, 1000u);
  EXPECT_EQ(segs[1].start_iter, 1000u);
  EXPECT_FALSE(segs[1].escaped);
}

TEST(DetectStaircase, SmoothDecayHasAtMostOneShortSegment) {
  Trajectory t;
  for (std::size_t i = 0; i < 400; ++i) t.append({i, 0.5 * std::exp(-i / 50.0), 0.0, {}});
  const auto segs = detect_staircase(t, {0.3634, 0.2}, 0.05);
  ASSERT_LE(segs.size(), 2u);
  for (const auto& s : segs) EXPECT_LT(s.points, 10u);
}

TEST(Config, KeyValueAndJson) {
  const KeyValues kv = parse_config_text("# comment\nd = 64\nprior=sparse_rademacher:p=0.9\n");
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"d", "64"}));
  const KeyValues js = parse_config_text(R"({"d": 64, "p_grid": [0.1, 0.5], "meta": {"note": "x"}})");
  EXPECT_EQ(*find_value(js, "p_grid"), "0.1,0.5");
  EXPECT_EQ(*find_value(js, "meta.note"), "x");
  EXPECT_EQ(parse_real_list("0.1:0.9:9").size(), 9u);
  EXPECT_NEAR(parse_real_list("0.1:0.9:9")[4], 0.5, 1e-15);
  EXPECT_EQ(format_real_list({0.25, 1.0}), "0.25,1");
}

TEST(Config, SchemaValidation) {
  ExperimentConfig cfg = experiment_config("fig2_trace");
  EXPECT_EQ(cfg.get_count("d"), 64u);
  EXPECT_THROW(cfg.set("nope", "1"), UsageError);
  EXPECT_THROW(cfg.set("d", "sixty"), UsageError);
  EXPECT_THROW(cfg.set("tau", "abc"), UsageError);
  cfg.set("staircase_levels", "0.36,0.1");
  EXPECT_EQ(cfg.get_reals("staircase_levels").size(), 2u);
  EXPECT_THROW(experiment_config("fig2_trace", {{"experiment", "fig1_sweep"}}), UsageError);
  EXPECT_NO_THROW(experiment_config("fig2_trace", {{"meta.version", "0"}}));
  EXPECT_THROW(find_experiment("fig3"), UsageError);
  EXPECT_EQ(experiment_registry().size(), 8u);
}

TEST(RunExperiment, ManifestRerunIsByteIdentical) {
  const auto a = scratch("fig1_a"), b = scratch("fig1_b");
  const ExperimentConfig cfg = experiment_config("fig1_sweep", {{"d", "40"}, {"p_grid", "0.3,0.9"}, {"n_samples", "500"}});
  const RunOutcome first = run_experiment(cfg, a);
  ASSERT_TRUE(first.ok) << first.error;
  const ExperimentConfig back = read_manifest(a);
  EXPECT_EQ(back.values(), cfg.values());
  ASSERT_TRUE(run_experiment(back, b).ok);
  EXPECT_EQ(slurp(a / "sweep.csv"), slurp(b / "sweep.csv"));
  const KeyValues man = read_key_values(a / "manifest.txt");
  EXPECT_EQ(*find_value(man, "meta.status"), "ok");
  EXPECT_NE(find_value(man, "meta.wall_seconds"), nullptr);
  EXPECT_EQ(slurp(a / "sweep.csv").find("wall"), std::string::npos);
}

TEST(RunExperiment, SweepRowsCarryTheory) {
  const auto dir = scratch("fig8");
  ASSERT_TRUE(run_experiment(experiment_config("fig8_sweep", {{"d", "60"}, {"r_grid", "0.5,1"}, {"n_samples", "300"}}), dir).ok);
  const std::string csv = slurp(dir / "sweep.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "r,method,empirical,stderr,theory,gaussian,identity");
}

TEST(RunExperiment, FailureWritesErrorManifest) {
  const auto dir = scratch("fig6_bad");
  const RunOutcome out = run_experiment(
      experiment_config("fig6_sweep", {{"series", "linear,bogus"}, {"r_grid", "1"}, {"d", "20"}, {"vamp_n_mc", "1000"},
                                       {"n_samples", "100"}}),
      dir);
  EXPECT_FALSE(out.ok);
  const KeyValues man = read_key_values(dir / "manifest.txt");
  EXPECT_EQ(*find_value(man, "meta.status"), "error");
  EXPECT_NE(find_value(man, "meta.error")->find("bogus"), std::string::npos);
}

TEST(RunExperiment, GdminWritesSummaryAndLockstepColumns) {
  const auto dir = scratch("gdmin");
  ASSERT_TRUE(run_experiment(experiment_config("gdmin_theorem", {{"d", "24"}, {"n_steps", "20"}, {"n_masks", "8"}}), dir).ok);
  const std::string traj = slurp(dir / "trajectory.csv");
  EXPECT_NE(traj.find("deviation_p1"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "summary.csv"));
  EXPECT_TRUE(fs::exists(dir / "B.csv"));
}

TEST(BindClosedForm, RestoresBayesDenoiserFromLabel) {
  const Prior prior = Prior::sparse_gaussian(0.4);
  const EncoderMatrix B = EncoderMatrix::haar(10, 10, {1, 0});
  const auto dir = scratch("bind");
  DenoisedAE model{B, B.matrix().transpose(), ClosedFormNonlin{[](double v) { return v; }, fstar_label(prior, 1.0)}};
  save_checkpoint(model, dir);
  Autoencoder back = load_checkpoint(dir);
  bind_closed_form(back);
  const auto& f = std::get<ClosedFormNonlin>(std::get<DenoisedAE>(back).f);
  ASSERT_TRUE(f.fn);
  EXPECT_DOUBLE_EQ(f(1.3), fstar_sparse_gaussian(1.3, state_evolution_params(1.0), 0.4));
}

#ifdef AELAB_CLI
TEST(Cli, RunListAndUsageErrors) {
  const auto dir = scratch("cli");
  const std::string cli = AELAB_CLI;
  EXPECT_EQ(std::system((cli + " list > /dev/null").c_str()), 0);
  EXPECT_EQ(std::system((cli + " run fig9_curve --out " + dir.string() + " > /dev/null").c_str()), 0);
  EXPECT_TRUE(fs::exists(dir / "curve.csv"));
  EXPECT_NE(std::system((cli + " run no_such_experiment 2> /dev/null").c_str()), 0);
  EXPECT_NE(std::system((cli + " run fig9_curve --set bogus=1 --out " + dir.string() + " 2> /dev/null").c_str()), 0);
}
#endif
