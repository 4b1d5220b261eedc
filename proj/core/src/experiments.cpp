#include "aelab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "aelab/amp.hpp"
#include "aelab/denoisers.hpp"
#include "aelab/diagnostics.hpp"
#include "aelab/error.hpp"
#include "aelab/io.hpp"
#include "aelab/theory.hpp"

#ifndef AELAB_VERSION
#define AELAB_VERSION "unknown"
#endif

namespace aelab {

namespace fs = std::filesystem;

namespace {

using Runner = std::function<void(const ExperimentConfig&, const fs::path&)>;

std::size_t rows_for(double r, std::size_t d) {
  if (!(r > 0.0 && r <= 1.0)) throw UsageError("r must lie in (0, 1]");
  const auto n = static_cast<std::size_t>(std::lround(r * static_cast<double>(d)));
  if (n == 0) throw UsageError("r·d rounds to zero code bits");
  return n;
}

SeedSpec master(const ExperimentConfig& cfg) { return {static_cast<std::uint64_t>(cfg.get_int("seed")), 0}; }

Schema sgd_schema(const std::string& lr, const std::string& batch, const std::string& iters,
                  const std::string& eval_every, const std::string& final_fraction) {
  return {
      {"lr", ParamType::Real, lr, "SGD step on the per-sample squared error"},
      {"batch", ParamType::Int, batch, "minibatch size"},
      {"n_iters", ParamType::Int, iters, "SGD iterations"},
      {"tau", ParamType::Real, "0.1", "straight-through temperature"},
      {"eval_every", ParamType::Int, eval_every, "iterations between held-out evaluations"},
      {"eval_samples", ParamType::Int, "4096", "held-out samples per evaluation"},
      {"final_lr_fraction", ParamType::Real, final_fraction, "learning rate at the end, as a fraction of lr"},
      {"encoder_lr_scale", ParamType::Real, "1", "encoder learning-rate multiplier"},
      {"nonlin_lr_scale", ParamType::Real, "1", "nonlinearity learning-rate multiplier"},
  };
}

SgdConfig sgd_from(const ExperimentConfig& cfg, SeedSpec seed) {
  SgdConfig s;
  s.learning_rate = cfg.get_real("lr");
  s.batch_size = cfg.get_count("batch");
  s.n_iters = cfg.get_count("n_iters");
  s.tau = cfg.get_real("tau");
  s.eval_every = cfg.get_count("eval_every");
  s.eval_samples = cfg.get_count("eval_samples");
  s.final_lr_fraction = cfg.get_real("final_lr_fraction");
  s.encoder_lr_scale = cfg.get_real("encoder_lr_scale");
  s.nonlin_lr_scale = cfg.get_real("nonlin_lr_scale");
  s.seed = seed;
  return s;
}

Schema concat(Schema a, const Schema& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

void save_trajectory(const Trajectory& t, const fs::path& path) { write_csv(t.to_csv(), path); }

void add_structure_cells(std::vector<Cell>& row, const Matrix& B) {
  const StructureReport rep = structure_report(B);
  row.emplace_back(rep.orth_defect);
  row.emplace_back(rep.perm_score);
  row.emplace_back(to_string(rep.verdict));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

// --- fig1_sweep ---------------------------------------------------------------

void run_fig1(const ExperimentConfig& cfg, const fs::path& out) {
  const Prior family = Prior::parse(cfg.get_string("prior"));
  const std::size_t d = cfg.get_count("d");
  const double r = cfg.get_real("r");
  const std::size_t n = rows_for(r, d);
  const std::string method = cfg.get_string("method");
  if (method != "scalar" && method != "sgd") throw UsageError("fig1_sweep: method must be scalar or sgd");
  const std::size_t samples = cfg.get_count("n_samples");
  const auto grid = cfg.get_reals("p_grid");

  CsvTable table{{"p", "series", "empirical", "stderr", "theory", "gaussian", "identity", "envelope", "alpha",
                  "orth_defect", "perm_score", "verdict"},
                 {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Prior prior = family.with_p(grid[i]);
    const double gauss = gaussian_mse(r), ident = identity_mse(prior, r);
    const double envelope = std::min(gauss, ident);
    const SeedSpec point = derive(master(cfg), i);
    auto base = [&](const std::string& series, const MseEstimate& e, double theory) {
      return std::vector<Cell>{grid[i], series, e.estimate, e.std_error, theory, gauss, ident, envelope};
    };
    if (method == "scalar") {
      const EncoderMatrix haar = EncoderMatrix::haar(n, d, derive(point, 0));
      const ScalarDecoderFit h = fit_scalar_decoder(haar, prior, samples, derive(point, 1));
      auto row = base("haar_alpha", h.mse, gauss);
      row.emplace_back(h.alpha);
      add_structure_cells(row, haar.matrix());
      table.add(std::move(row));
      const EncoderMatrix id = EncoderMatrix::identity_like(n, d);
      const ScalarDecoderFit s = fit_scalar_decoder(id, prior, samples, derive(point, 2));
      row = base("identity_alpha", s.mse, ident);
      row.emplace_back(s.alpha);
      add_structure_cells(row, id.matrix());
      table.add(std::move(row));
    } else {
      SgdConfig sgd = sgd_from(cfg, derive(point, 3));
      const SgdResult res = sgd_train(init_linear(d, n, derive(point, 4)), prior, sgd);
      save_trajectory(res.trajectory, out / ("trajectory_p" + std::to_string(i) + ".csv"));
      if (res.aborted) throw NumericalError("fig1_sweep: " + res.abort_reason);
      const MseEstimate e = mse_monte_carlo(res.model, prior, samples, derive(point, 5));
      auto row = base("sgd", e, envelope);
      row.emplace_back(std::string{});
      add_structure_cells(row, encoder(res.model).matrix());
      table.add(std::move(row));
    }
  }
  write_csv(table, out / "sweep.csv");
}

// --- fig2_trace / fig5_trace --------------------------------------------------

void write_structure(const Autoencoder& model, const Prior& prior, double r, const Trajectory& traj,
                     std::size_t samples, SeedSpec seed, const fs::path& out) {
  const Matrix& B = encoder(model).matrix();
  const MseEstimate mc = mse_monte_carlo(model, prior, samples, seed);
  CsvTable t{{"orth_defect", "perm_score", "verdict", "final_loss", "final_stderr", "mc_mse", "mc_stderr",
              "theory_gaussian", "theory_identity"},
             {}};
  std::vector<Cell> row;
  add_structure_cells(row, B);
  row.insert(row.end(), {traj.back().loss, traj.back().loss_stderr, mc.estimate, mc.std_error, gaussian_mse(r),
                         identity_mse(prior, r)});
  t.add(std::move(row));
  write_csv(t, out / "structure.csv");
  write_matrix_csv(B, out / "B.csv");
  save_checkpoint(model, out / "checkpoint");
}

void run_fig2(const ExperimentConfig& cfg, const fs::path& out) {
  const Prior prior = Prior::parse(cfg.get_string("prior"));
  const std::size_t d = cfg.get_count("d");
  const double r = cfg.get_real("r");
  const std::size_t n = rows_for(r, d);
  const SgdResult res = sgd_train(init_linear(d, n, derive(master(cfg), 0)), prior, sgd_from(cfg, derive(master(cfg), 1)));
  save_trajectory(res.trajectory, out / "trajectory.csv");
  if (res.aborted) throw NumericalError("fig2_trace: " + res.abort_reason);

  std::vector<double> levels = cfg.get_reals("staircase_levels");
  if (levels.empty()) {
    levels.push_back(gaussian_mse(r));
    const double ident = identity_mse(prior, r);
    if (ident < levels.front()) levels.push_back(ident);
  }
  const auto segments = detect_staircase(res.trajectory, levels, cfg.get_real("staircase_tol"));
  CsvTable st{{"level", "start_iter", "end_iter", "points", "length", "escaped", "escape_iter"}, {}};
  for (const auto& s : segments)
    st.add({s.level, static_cast<long long>(s.start_iter), static_cast<long long>(s.end_iter),
            static_cast<long long>(s.points), static_cast<long long>(s.length), static_cast<long long>(s.escaped),
            static_cast<long long>(s.escape_iter)});
  write_csv(st, out / "staircase.csv");
  write_structure(res.model, prior, r, res.trajectory, cfg.get_count("n_samples"), derive(master(cfg), 2), out);
}

void run_fig5(const ExperimentConfig& cfg, const fs::path& out) {
  const Prior prior = Prior::parse(cfg.get_string("prior"));
  const std::size_t d = cfg.get_count("d");
  const double r = cfg.get_real("r");
  const std::size_t n = rows_for(r, d);
  const std::string nl = cfg.get_string("nonlinearity");
  if (nl != "parametric" && nl != "tanh_mixture") throw UsageError("fig5_trace: nonlinearity must be parametric or tanh_mixture");
  const SgdResult res = sgd_train(init_denoised(d, n, derive(master(cfg), 0), nl == "tanh_mixture"), prior,
                                  sgd_from(cfg, derive(master(cfg), 1)));
  save_trajectory(res.trajectory, out / "trajectory.csv");
  if (res.aborted) throw NumericalError("fig5_trace: " + res.abort_reason);
  write_structure(res.model, prior, r, res.trajectory, cfg.get_count("n_samples"), derive(master(cfg), 2), out);
}

// --- fig4_sweep / fig8_sweep --------------------------------------------------

std::vector<Cell> denoised_point(const ExperimentConfig& cfg, const Prior& prior, double r, double grid_value,
                                 SeedSpec seed, const fs::path& out, const std::string& tag) {
  const std::size_t d = cfg.get_count("d");
  const std::size_t samples = cfg.get_count("n_samples");
  const std::string method = cfg.get_string("method");
  MseEstimate e;
  if (method == "bayes") {
    e = bayes_denoised_mc(prior, r, d, samples, seed);
  } else if (method == "sgd") {
    const std::size_t n = rows_for(r, d);
    const SgdResult res = sgd_train(init_denoised(d, n, derive(seed, 0)), prior, sgd_from(cfg, derive(seed, 1)));
    save_trajectory(res.trajectory, out / ("trajectory_" + tag + ".csv"));
    if (res.aborted) throw NumericalError("denoised sweep: " + res.abort_reason);
    e = mse_monte_carlo(res.model, prior, samples, derive(seed, 2));
  } else {
    throw UsageError("method must be bayes or sgd");
  }
  return {grid_value, method, e.estimate, e.std_error, optimal_denoised_mse(prior, r), gaussian_mse(r),
          identity_mse(prior, r)};
}

Schema denoised_sweep_schema(const std::string& prior, const std::string& d, const std::string& grid_key,
                             const std::string& grid, const std::string& fixed_key, const std::string& fixed) {
  return concat({{"seed", ParamType::Int, "0", "master seed"},
                 {"prior", ParamType::String, prior, "prior spec"},
                 {"d", ParamType::Int, d, "input dimension"},
                 {grid_key, ParamType::RealList, grid, "sweep grid"},
                 {fixed_key, ParamType::Real, fixed, "value held fixed"},
                 {"method", ParamType::String, "bayes", "bayes: f*(Bᵀ sign(Bx)) with Haar B; sgd: trained"},
                 {"n_samples", ParamType::Int, "4000", "Monte-Carlo samples per point"}},
                sgd_schema("0.005", "64", "20000", "1000", "0.05"));
}

void run_fig4(const ExperimentConfig& cfg, const fs::path& out) {
  const Prior family = Prior::parse(cfg.get_string("prior"));
  const double r = cfg.get_real("r");
  CsvTable t{{"p", "method", "empirical", "stderr", "theory", "gaussian", "identity"}, {}};
  const auto grid = cfg.get_reals("p_grid");
  for (std::size_t i = 0; i < grid.size(); ++i)
    t.add(denoised_point(cfg, family.with_p(grid[i]), r, grid[i], derive(master(cfg), i), out, "p" + std::to_string(i)));
  write_csv(t, out / "sweep.csv");
}

void run_fig8(const ExperimentConfig& cfg, const fs::path& out) {
  const Prior prior = Prior::parse(cfg.get_string("prior")).with_p(cfg.get_real("p"));
  CsvTable t{{"r", "method", "empirical", "stderr", "theory", "gaussian", "identity"}, {}};
  const auto grid = cfg.get_reals("r_grid");
  for (std::size_t i = 0; i < grid.size(); ++i)
    t.add(denoised_point(cfg, prior, grid[i], grid[i], derive(master(cfg), i), out, "r" + std::to_string(i)));
  write_csv(t, out / "sweep.csv");
}

// --- fig6_sweep ---------------------------------------------------------------

void run_fig6(const ExperimentConfig& cfg, const fs::path& out) {
  const double p = cfg.get_real("p");
  const Prior prior = Prior::sparse_gaussian(p);
  const std::size_t d = cfg.get_count("d");
  const std::size_t samples = cfg.get_count("n_samples");
  const auto series = split(cfg.get_string("series"), ',');
  VampOptions vopt;
  vopt.n_mc = cfg.get_count("vamp_n_mc");

  CsvTable sweep{{"r", "series", "empirical", "stderr", "theory", "vamp", "optimal_denoised", "gaussian"}, {}};
  CsvTable vamp{{"r", "k", "gamma1", "tau1", "gamma2", "tau2", "mse"}, {}};
  CsvTable vsum{{"r", "mse", "converged", "last_delta", "clamp_events"}, {}};
  const auto grid = cfg.get_reals("r_grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const SeedSpec point = derive(master(cfg), i);
    const VampResult v = vamp_se_run(p, r, cfg.get_count("vamp_k"), 1e-6, derive(point, 0), vopt);
    for (const auto& s : v.trace) vamp.add({r, static_cast<long long>(s.k), s.gamma1, s.tau1, s.gamma2, s.tau2, s.mse});
    const double delta = v.trace.size() >= 2 ? std::abs(v.trace.back().mse - v.trace[v.trace.size() - 2].mse) : 0.0;
    vsum.add({r, v.mse, static_cast<long long>(v.converged), delta, static_cast<long long>(v.clamp_events)});
    const double opt = optimal_denoised_mse(prior, r), gauss = gaussian_mse(r);
    for (const auto& s : series) {
      MseEstimate e;
      double theory = 0.0;
      if (s == "linear") {
        const std::size_t n = rows_for(r, d);
        e = fit_scalar_decoder(EncoderMatrix::haar(n, d, derive(point, 1)), prior, samples, derive(point, 2)).mse;
        theory = gauss;
      } else if (s == "denoised") {
        e = bayes_denoised_mc(prior, r, d, samples, derive(point, 3));
        theory = opt;
      } else if (s == "multilayer") {
        SgdConfig sgd = sgd_from(cfg, derive(point, 4));
        const SgdResult res = train_multilayer(prior, r, d, sgd, derive(point, 5));
        save_trajectory(res.trajectory, out / ("trajectory_multilayer_r" + std::to_string(i) + ".csv"));
        if (res.aborted) throw NumericalError("fig6_sweep: " + res.abort_reason);
        save_checkpoint(res.model, out / ("checkpoint_multilayer_r" + std::to_string(i)));
        e = mse_monte_carlo(res.model, prior, samples, derive(point, 6));
        theory = v.mse;
      } else {
        throw UsageError("fig6_sweep: unknown series '" + s + "' (linear, denoised, multilayer)");
      }
      sweep.add({r, s, e.estimate, e.std_error, theory, v.mse, opt, gauss});
    }
  }
  write_csv(sweep, out / "sweep.csv");
  write_csv(vamp, out / "vamp_trace.csv");
  write_csv(vsum, out / "vamp_summary.csv");
}

// --- fig9_curve ---------------------------------------------------------------

void run_fig9(const ExperimentConfig& cfg, const fs::path& out) {
  const double r = cfg.get_real("r");
  const auto grid = cfg.get_reals("p_grid");
  CsvTable curve{{"family", "p", "optimal_denoised", "gaussian", "identity"}, {}};
  CsvTable crit{{"family", "r", "critical_linear", "critical_denoised"}, {}};
  for (const auto& name : split(cfg.get_string("families"), ',')) {
    const PriorKind kind = prior_kind_from_string(name);
    const Prior base(kind, 1.0);
    const MseCurve opt = theory_curve("optimal_denoised", base, grid, CurveAxis::P, r);
    for (std::size_t i = 0; i < grid.size(); ++i)
      curve.add({to_string(kind), grid[i], opt.values[i], gaussian_mse(r), identity_mse(base.with_p(grid[i]), r)});
    const auto lin = critical_sparsity_linear(kind);
    const auto den = critical_sparsity_denoised(kind, r);
    crit.add({to_string(kind), r, lin ? Cell(*lin) : Cell(std::string{}), den ? Cell(*den) : Cell(std::string{})});
  }
  write_csv(curve, out / "curve.csv");
  write_csv(crit, out / "critical.csv");
}

// --- gdmin_theorem ------------------------------------------------------------

void run_gdmin(const ExperimentConfig& cfg, const fs::path& out) {
  const std::size_t d = cfg.get_count("d");
  const double r = cfg.get_real("r");
  GdminConfig g;
  g.p = cfg.get_real("p");
  g.n_steps = cfg.get_count("n_steps");
  g.n_masks = cfg.get_count("n_masks");
  g.eta = cfg.get_real("eta");
  g.noise_sigma = cfg.get_real("noise_sigma");
  g.seed = master(cfg);
  const std::size_t every = std::max<std::size_t>(1, cfg.get_count("record_every"));
  const bool compare = cfg.get_bool("compare_p1");

  GdminRunner run(d, r, g);
  GdminConfig g1 = g;
  g1.p = 1.0;
  std::optional<GdminRunner> ref;
  if (compare) ref.emplace(d, r, g1);
  const SubspaceTracker tracker(run.B());

  Trajectory traj;
  double sup_dev = 0.0;
  for (std::size_t t = 0; t < g.n_steps; ++t) {
    const Matrix before = run.B();
    double dev = 0.0;
    if (ref) {
      dev = operator_norm(before - ref->B());
      sup_dev = std::max(sup_dev, dev);
      ref->step();
    }
    run.step();
    if (t % every != 0 && t + 1 != g.n_steps) continue;
    TrajectoryPoint pt = run.snapshot();
    pt.iter = t;
    pt.diagnostics.emplace_back("ssT_dev", singular_deviation(before));
    pt.diagnostics.emplace_back("subspace_drift", tracker.drift(before));
    pt.diagnostics.emplace_back("orth_defect", orthogonality_defect(before));
    pt.diagnostics.emplace_back("perm_score", permutation_identity_score(before));
    if (ref) {
      pt.diagnostics.emplace_back("deviation_p1", dev);
      pt.diagnostics.emplace_back("loss_p1", ref->snapshot().loss);
    }
    traj.append(std::move(pt));
  }
  if (ref) sup_dev = std::max(sup_dev, operator_norm(run.B() - ref->B()));
  save_trajectory(traj, out / "trajectory.csv");

  const std::size_t masks = std::max<std::size_t>(g.n_masks, 1);
  const Matrix A = optimal_A(run.B(), g.p, sample_masks(d, g.p, masks, derive(g.seed, 3)));
  const double final_mse = exact_linear_mse(A, run.B(), g.p, sample_masks(d, g.p, 4 * masks, derive(g.seed, 4)));
  const double target = gaussian_mse(static_cast<double>(rows_for(r, d)) / static_cast<double>(d));
  CsvTable s{{"d", "r", "p", "n_steps", "eta", "final_mse", "target", "rel_error", "final_ssT_dev", "sup_deviation_p1"},
             {}};
  s.add({static_cast<long long>(d), r, g.p, static_cast<long long>(g.n_steps), run.eta(), final_mse, target,
         std::abs(final_mse - target) / target, singular_deviation(run.B()),
         compare ? Cell(sup_dev) : Cell(std::string{})});
  write_csv(s, out / "summary.csv");
  write_matrix_csv(run.B(), out / "B.csv");
  write_matrix_csv(A, out / "A.csv");
}

struct Entry {
  ExperimentInfo info;
  Runner run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> registry = [] {
    std::vector<Entry> e;
    e.push_back({{"fig1_sweep", "linear-decoder MSE vs p: Haar and identity encoders with fitted scale, or SGD",
                  concat({{"seed", ParamType::Int, "0", "master seed"},
                          {"prior", ParamType::String, "sparse_rademacher", "prior family"},
                          {"d", ParamType::Int, "200", "input dimension"},
                          {"r", ParamType::Real, "1", "compression rate"},
                          {"p_grid", ParamType::RealList, "0.1:0.9:9", "keep probabilities"},
                          {"method", ParamType::String, "scalar", "scalar or sgd"},
                          {"n_samples", ParamType::Int, "20000", "Monte-Carlo samples per point"}},
                         sgd_schema("0.01", "64", "40000", "1000", "0.02"))},
                 run_fig1});
    e.push_back({{"fig2_trace", "SGD loss trace of the linear autoencoder with staircase detection",
                  concat({{"seed", ParamType::Int, "0", "master seed"},
                          {"prior", ParamType::String, "sparse_rademacher:p=0.9", "prior spec"},
                          {"d", ParamType::Int, "64", "input dimension"},
                          {"r", ParamType::Real, "1", "compression rate"},
                          {"staircase_levels", ParamType::RealList, "", "plateau levels; empty uses the theory values"},
                          {"staircase_tol", ParamType::Real, "0.05", "relative band around each level"},
                          {"n_samples", ParamType::Int, "20000", "Monte-Carlo samples for the final MSE"}},
                         sgd_schema("0.01", "64", "40000", "200", "0.02"))},
                 run_fig2});
    e.push_back({{"fig4_sweep", "denoised MSE vs p at fixed r",
                  denoised_sweep_schema("sparse_gaussian", "400", "p_grid", "0.1:0.9:9", "r", "1")},
                 run_fig4});
    e.push_back({{"fig5_trace", "SGD trace of the denoised autoencoder: BBᵀ and BA distances to the identity",
                  concat({{"seed", ParamType::Int, "0", "master seed"},
                          {"prior", ParamType::String, "sparse_gaussian:p=0.4", "prior spec"},
                          {"d", ParamType::Int, "100", "input dimension"},
                          {"r", ParamType::Real, "1", "compression rate"},
                          {"nonlinearity", ParamType::String, "parametric", "parametric or tanh_mixture"},
                          {"n_samples", ParamType::Int, "20000", "Monte-Carlo samples for the final MSE"}},
                         sgd_schema("0.005", "64", "20000", "200", "0.05"))},
                 run_fig5});
    e.push_back({{"fig6_sweep", "MSE vs r for linear, denoised and multilayer decoders with the VAMP curve",
                  concat({{"seed", ParamType::Int, "0", "master seed"},
                          {"p", ParamType::Real, "0.3", "sparse-Gaussian keep probability"},
                          {"d", ParamType::Int, "500", "input dimension"},
                          {"r_grid", ParamType::RealList, "0.2:1:5", "compression rates"},
                          {"series", ParamType::String, "linear,denoised,multilayer", "series to compute"},
                          {"n_samples", ParamType::Int, "4000", "Monte-Carlo samples per point"},
                          {"vamp_k", ParamType::Int, "15", "state-evolution iterations"},
                          {"vamp_n_mc", ParamType::Int, "1000000", "Monte-Carlo samples for B1"}},
                         sgd_schema("0.0002", "64", "6000", "500", "0.1"))},
                 run_fig6});
    e.push_back({{"fig8_sweep", "denoised MSE vs r at fixed p",
                  denoised_sweep_schema("sparse_gaussian", "400", "r_grid", "0.25,0.5,0.75,1", "p", "0.4")},
                 run_fig8});
    e.push_back({{"fig9_curve", "Bayes-denoised MSE vs p against the Gaussian value, with critical sparsities",
                  {{"seed", ParamType::Int, "0", "unused; kept for a uniform interface"},
                   {"families", ParamType::String, "sparse_gaussian,sparse_laplace,sparse_rademacher", "prior families"},
                   {"p_grid", ParamType::RealList, "0.1:0.9:9", "keep probabilities"},
                   {"r", ParamType::Real, "1", "compression rate"}}},
                 run_fig9});
    e.push_back({{"gdmin_theorem", "GD-min run with SSᵀ, subspace and p=1 deviation diagnostics",
                  {{"seed", ParamType::Int, "0", "master seed"},
                   {"d", ParamType::Int, "128", "input dimension"},
                   {"r", ParamType::Real, "0.5", "compression rate"},
                   {"p", ParamType::Real, "0.5", "keep probability"},
                   {"n_steps", ParamType::Int, "3000", "GD-min steps"},
                   {"n_masks", ParamType::Int, "32", "masks per step"},
                   {"eta", ParamType::Real, "0", "step size; 0 selects 0.5/sqrt(d)"},
                   {"noise_sigma", ParamType::Real, "0", "std of the injected gradient noise"},
                   {"compare_p1", ParamType::Bool, "true", "run the p=1 reference in lockstep"},
                   {"record_every", ParamType::Int, "10", "steps between trajectory rows"}}},
                 run_gdmin});
    return e;
  }();
  return registry;
}

const Entry& find_entry(const std::string& name) {
  for (const auto& e : entries())
    if (e.info.name == name) return e;
  std::string known;
  for (const auto& e : entries()) known += (known.empty() ? "" : ", ") + e.info.name;
  throw UsageError("unknown experiment '" + name + "' (known: " + known + ")");
}

KeyValues manifest_values(const ExperimentConfig& cfg) {
  KeyValues kv{{"experiment", cfg.experiment()}};
  kv.insert(kv.end(), cfg.values().begin(), cfg.values().end());
  kv.emplace_back("meta.version", AELAB_VERSION);
  return kv;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

const ExperimentInfo& find_experiment(const std::string& name) { return find_entry(name).info; }

ExperimentConfig experiment_config(const std::string& name, const KeyValues& raw) {
  return make_config(name, find_experiment(name).schema, raw);
}

RunOutcome run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const Entry& entry = find_entry(cfg.experiment());
  RunOutcome outcome;
  outcome.dir = out_dir;
  fs::create_directories(out_dir);
  KeyValues manifest = manifest_values(cfg);
  KeyValues running = manifest;
  running.emplace_back("meta.status", "running");
  write_key_values(running, out_dir / "manifest.txt", "aelab run manifest");

  const auto start = std::chrono::steady_clock::now();
  try {
    entry.run(cfg, out_dir);
  } catch (const std::exception& e) {
    outcome.ok = false;
    outcome.error = e.what();
  }
  outcome.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  manifest.emplace_back("meta.status", outcome.ok ? "ok" : "error");
  if (!outcome.ok) manifest.emplace_back("meta.error", outcome.error);
  manifest.emplace_back("meta.wall_seconds", format_real(outcome.wall_seconds));
  write_key_values(manifest, out_dir / "manifest.txt", "aelab run manifest");
  return outcome;
}

ExperimentConfig read_manifest(const fs::path& run_dir) {
  const fs::path path = fs::is_directory(run_dir) ? run_dir / "manifest.txt" : run_dir;
  const KeyValues kv = read_key_values(path);
  const std::string* name = find_value(kv, "experiment");
  if (!name) throw UsageError(path.string() + " has no experiment key");
  return experiment_config(*name, kv);
}

std::string fstar_label(const Prior& prior, double r) {
  return "fstar|" + prior.to_string() + "|r=" + format_real(r);
}

void bind_closed_form(Autoencoder& model) {
  auto* den = std::get_if<DenoisedAE>(&model);
  if (!den) return;
  auto* cf = std::get_if<ClosedFormNonlin>(&den->f);
  if (!cf || cf->fn) return;
  const auto parts = split(cf->label, '|');
  if (parts.size() != 3 || parts[0] != "fstar" || parts[2].rfind("r=", 0) != 0)
    throw UsageError("cannot rebind closed-form nonlinearity '" + cf->label + "'");
  const Prior prior = Prior::parse(parts[1]);
  const double r = std::stod(parts[2].substr(2));
  cf->fn = optimal_denoiser(prior, state_evolution_params(r));
}

ScalarDecoderFit fit_scalar_decoder(const EncoderMatrix& B, const Prior& prior, std::size_t n_samples, SeedSpec seed) {
  if (n_samples < 2) throw DomainError("fit_scalar_decoder: need at least two samples");
  const std::size_t d = static_cast<std::size_t>(B.cols());
  constexpr std::size_t kChunk = 1024;
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c * kChunk < n_samples; ++c) {
    Rng rng(derive(derive(seed, 0), c));
    const std::size_t count = std::min(kChunk, n_samples - c * kChunk);
    const Matrix x = sample_matrix(prior, d, count, rng);
    const Matrix y = B.matrix().transpose() * sign_with_ties(B.matrix() * x, rng);
    num += (x.array() * y.array()).sum();
    den += y.squaredNorm();
  }
  ScalarDecoderFit fit;
  fit.alpha = den > 0.0 ? num / den : 0.0;
  const LinearDecoderAE model{B, fit.alpha * B.matrix().transpose()};
  fit.mse = mse_monte_carlo(model, prior, n_samples, derive(seed, 1));
  return fit;
}

MseEstimate bayes_denoised_mc(const Prior& prior, double r, std::size_t d, std::size_t n_samples, SeedSpec seed) {
  const std::size_t n = rows_for(r, d);
  const EncoderMatrix B = EncoderMatrix::haar(n, d, derive(seed, 0));
  const auto f = optimal_denoiser(prior, state_evolution_params(static_cast<double>(n) / static_cast<double>(d)));
  const DenoisedAE model{B, B.matrix().transpose(), ClosedFormNonlin{f, fstar_label(prior, r)}};
  return mse_monte_carlo(model, prior, n_samples, derive(seed, 1));
}

SgdResult train_multilayer(const Prior& prior, double r, std::size_t d, const SgdConfig& cfg, SeedSpec encoder_seed) {
  const std::size_t n = rows_for(r, d);
  SgdConfig c = cfg;
  c.trainable.encoder = false;
  c.trainable.decoder = false;
  return sgd_train(init_multilayer(EncoderMatrix::haar(n, d, encoder_seed)), prior, c);
}

}  // namespace aelab
