#pragma once

namespace aelab {

/// Scalar channel y = μ·x + σ·g seen by the first decoder iterate.
struct StateEvolutionParams {
  double mu = 0.0;
  double sigma2 = 0.0;
};

/// μ = r·√(2/π), σ² = r·(1 − r·2/π).
StateEvolutionParams state_evolution_params(double r);

}  // namespace aelab
