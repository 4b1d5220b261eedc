#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "aelab/config.hpp"
#include "aelab/linalg.hpp"
#include "aelab/models.hpp"
#include "aelab/priors.hpp"
#include "aelab/training.hpp"

namespace aelab {

struct ExperimentInfo {
  std::string name;
  std::string summary;
  Schema schema;
};

/// Closed registry: fig1_sweep, fig2_trace, fig4_sweep, fig5_trace, fig6_sweep,
/// fig8_sweep, fig9_curve, gdmin_theorem.
const std::vector<ExperimentInfo>& experiment_registry();
/// Throws UsageError for names outside the registry.
const ExperimentInfo& find_experiment(const std::string& name);
ExperimentConfig experiment_config(const std::string& name, const KeyValues& raw = {});

struct RunOutcome {
  std::filesystem::path dir;
  bool ok = true;
  std::string error;
  double wall_seconds = 0.0;
};

/// Writes the experiment's CSVs and checkpoints under out_dir, plus
/// manifest.txt holding the full configuration. A failed run keeps its partial
/// outputs and records the error in the manifest.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Configuration stored in a run directory's manifest.txt.
ExperimentConfig read_manifest(const std::filesystem::path& run_dir);

/// Label stored for a Bayes denoiser, e.g. "fstar|sparse_gaussian:p=0.4|r=1".
std::string fstar_label(const Prior& prior, double r);
/// Rebinds closed-form nonlinearities restored by load_checkpoint from their labels.
void bind_closed_form(Autoencoder& model);

struct ScalarDecoderFit {
  double alpha = 0.0;
  MseEstimate mse;
};

/// Best decoder of the form A = α·Bᵀ: α fitted by least squares on one sample
/// set, MSE measured by Monte Carlo on an independent one.
ScalarDecoderFit fit_scalar_decoder(const EncoderMatrix& B, const Prior& prior, std::size_t n_samples, SeedSpec seed);

/// Monte-Carlo MSE of f*(Bᵀ·sign(Bx)) with Haar B of n = round(r·d) rows.
MseEstimate bayes_denoised_mc(const Prior& prior, double r, std::size_t d, std::size_t n_samples, SeedSpec seed);

/// Multilayer decoder on a frozen Haar encoder, trained by SGD.
SgdResult train_multilayer(const Prior& prior, double r, std::size_t d, const SgdConfig& cfg, SeedSpec encoder_seed);

}  // namespace aelab
