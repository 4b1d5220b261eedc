#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aelab/amp.hpp"
#include "aelab/config.hpp"
#include "aelab/denoisers.hpp"
#include "aelab/diagnostics.hpp"
#include "aelab/error.hpp"
#include "aelab/experiments.hpp"
#include "aelab/io.hpp"
#include "aelab/models.hpp"
#include "aelab/se_params.hpp"
#include "aelab/theory.hpp"

namespace {

using namespace aelab;

int cmd_run(const std::string& experiment, const std::string& config_file, const std::string& out_dir,
            const std::string& manifest, const std::vector<std::string>& overrides, const long long* seed) {
  KeyValues raw;
  std::string name = experiment;
  if (!manifest.empty()) {
    const ExperimentConfig from = read_manifest(manifest);
    name = from.experiment();
    raw = from.values();
  }
  if (!config_file.empty()) {
    const KeyValues file = read_config_file(config_file);
    raw.insert(raw.end(), file.begin(), file.end());
  }
  if (name.empty()) {
    if (const std::string* n = find_value(raw, "experiment")) name = *n;
  }
  if (name.empty()) throw UsageError("run: name an experiment or pass --manifest");
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + o + "'");
    raw.emplace_back(trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
  }
  if (seed) raw.emplace_back("seed", std::to_string(*seed));

  const ExperimentConfig cfg = experiment_config(name, raw);
  const std::string dir = out_dir.empty() ? "runs/" + name : out_dir;
  const RunOutcome outcome = run_experiment(cfg, dir);
  if (!outcome.ok) {
    std::cerr << "aelab: " << name << " failed: " << outcome.error << "\n";
    return 1;
  }
  std::cout << outcome.dir.string() << "\n";
  return 0;
}

int cmd_list() {
  for (const auto& info : experiment_registry()) {
    std::cout << info.name << "\n  " << info.summary << "\n";
    for (const auto& p : info.schema)
      std::cout << "    " << p.key << " = " << p.default_value << "  # " << p.help << "\n";
  }
  return 0;
}

int cmd_theory(const std::string& curve, const std::string& prior_spec, const std::string& grid,
               const std::string& axis, double fixed) {
  CurveAxis a;
  if (axis == "r") a = CurveAxis::R;
  else if (axis == "p") a = CurveAxis::P;
  else throw UsageError("--axis must be r or p");
  const Prior prior = Prior::parse(prior_spec);
  std::cout << to_csv_string(curve_table({theory_curve(curve, prior, parse_real_list(grid), a, fixed)}));
  return 0;
}

int cmd_vamp(double p, double r, std::size_t k, std::size_t n_mc, long long seed) {
  VampOptions opt;
  opt.n_mc = n_mc;
  const VampResult res = vamp_se_run(p, r, k, 1e-6, {static_cast<std::uint64_t>(seed), 0}, opt);
  std::cout << to_csv_string(vamp_trace_table(res));
  std::cerr << "mse=" << format_real(res.mse) << " converged=" << (res.converged ? "true" : "false")
            << " clamp_events=" << res.clamp_events << "\n";
  return 0;
}

int cmd_diagnose(const std::string& path) {
  Autoencoder model = load_checkpoint(path);
  bind_closed_form(model);
  const StructureReport rep = structure_report(encoder(model).matrix());
  CsvTable t{{"architecture", "n", "d", "orth_defect", "perm_score", "singular_deviation", "verdict"}, {}};
  const Matrix& B = encoder(model).matrix();
  t.add({architecture_name(model), static_cast<long long>(B.rows()), static_cast<long long>(B.cols()),
         rep.orth_defect, rep.perm_score, singular_deviation(B), to_string(rep.verdict)});
  std::cout << to_csv_string(t);
  return 0;
}

int cmd_denoiser_table(const std::string& prior_spec, double r, double lo, double hi, std::size_t points) {
  const Prior prior = Prior::parse(prior_spec);
  std::cout << to_csv_string(denoiser_table(optimal_denoiser(prior, state_evolution_params(r)), lo, hi, points));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aelab: sparse-signal autoencoder experiments"};
  app.require_subcommand(1);

  std::string experiment, config_file, out_dir, manifest;
  std::vector<std::string> overrides;
  long long seed = 0;
  auto* run = app.add_subcommand("run", "run a registered experiment");
  run->add_option("experiment", experiment, "experiment name (see `aelab list`)");
  run->add_option("--config", config_file, "key=value or JSON config file");
  run->add_option("--out", out_dir, "output directory (default runs/<experiment>)");
  auto* seed_opt = run->add_option("--seed", seed, "master seed");
  run->add_option("--set", overrides, "extra key=value overrides")->take_all();
  run->add_option("--manifest", manifest, "re-run from a manifest.txt or run directory");

  app.add_subcommand("list", "list experiments and their parameters");

  std::string curve, prior_spec = "sparse_gaussian:p=0.4", grid = "0.1:1:10", axis = "r";
  double fixed = 1.0;
  auto* theory = app.add_subcommand("theory", "print a theory curve as CSV");
  theory->add_option("curve", curve, "gaussian, identity or optimal_denoised")->required();
  theory->add_option("--prior", prior_spec, "prior spec, e.g. sparse_rademacher:p=0.8");
  theory->add_option("--grid", grid, "a,b,c or lo:hi:n");
  theory->add_option("--axis", axis, "r or p");
  theory->add_option("--fixed", fixed, "value of the other coordinate");

  double vp = 0.3, vr = 1.0;
  std::size_t vk = 15, vmc = 1'000'000;
  long long vseed = 0;
  auto* vamp = app.add_subcommand("vamp-se", "VAMP state evolution trace as CSV");
  vamp->add_option("--p", vp, "sparse-Gaussian keep probability");
  vamp->add_option("--r", vr, "compression rate");
  vamp->add_option("--k", vk, "iterations");
  vamp->add_option("--n-mc", vmc, "Monte-Carlo samples for B1");
  vamp->add_option("--seed", vseed, "seed for B1");

  std::string checkpoint;
  auto* diagnose = app.add_subcommand("diagnose", "structure report of a saved model");
  diagnose->add_option("checkpoint", checkpoint, "checkpoint directory")->required();

  std::string dprior = "sparse_gaussian:p=0.4";
  double dr = 1.0, dlo = -10.0, dhi = 10.0;
  std::size_t dpoints = 201;
  auto* dtable = app.add_subcommand("denoiser-table", "tabulate the Bayes denoiser");
  dtable->add_option("--prior", dprior, "prior spec");
  dtable->add_option("--r", dr, "compression rate");
  dtable->add_option("--lo", dlo, "left end");
  dtable->add_option("--hi", dhi, "right end");
  dtable->add_option("--points", dpoints, "grid points");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(experiment, config_file, out_dir, manifest, overrides, seed_opt->count() ? &seed : nullptr);
    if (app.got_subcommand("list")) return cmd_list();
    if (*theory) return cmd_theory(curve, prior_spec, grid, axis, fixed);
    if (*vamp) return cmd_vamp(vp, vr, vk, vmc, vseed);
    if (*diagnose) return cmd_diagnose(checkpoint);
    if (*dtable) return cmd_denoiser_table(dprior, dr, dlo, dhi, dpoints);
  } catch (const aelab::UsageError& e) {
    std::cerr << "aelab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "aelab: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
