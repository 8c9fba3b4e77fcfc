#pragma once

// Simulation recipes: three toy models, three structured covariance models
// and two random-covariance models.

#include "rsda/population.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace rsda {

/// Toy 1: Sigma = I, mu2 = a 1_p.
/// Toy 2: unit diagonal, 0.5 off-diagonal, mu2 = a (1_5, 0).
/// Toy 3: as toy 2 with mu2 = a (1_{p/2}, 0).
/// mu1 = 0 and a is set so the Fisher rule's error equals target_error.
PopulationModel build_toy_model(int id, Eigen::Index p, double target_error);

/// Model 1: compound symmetry 0.5. Model 2: sigma_ij = 0.7^|i-j|.
/// Model 3: I + A A^T with A a p x 5 standard normal draw from `seed`.
/// mu1 = 0, mu2 = a (1_{p/2}, 0), calibrated to target_error.
PopulationModel build_structured_model(int id, Eigen::Index p, double target_error,
                                       std::uint64_t seed);

/// Random Model 1: Sigma = Mn^T Mn + diag(v), Mn = M / ||M||, v ~ U(0,1).
/// Random Model 2: Sigma = 4 Mn^T Mn.
/// beta has ceil(sparsity * p) standard normal nonzeros rescaled so that
/// beta^T Sigma beta = 12; mu1 = 0 and mu2 = -Sigma beta.
PopulationModel build_random_model(int id, Eigen::Index p, double sparsity, std::uint64_t seed);

/// Calibrated scale a = 2 Phi^-1(1 - target) / sqrt(u^T Sigma^-1 u).
double calibrate_mean_scale(const SymMatrix& sigma, const Vector& pattern, double target_error);

enum class ModelFamily { toy, structured, random };

struct ModelRecipe {
  ModelFamily family = ModelFamily::toy;
  int id = 1;
  Eigen::Index p = 50;
  double target_error = 0.10;  // toy and structured families
  double sparsity = 1.0;       // random family

  /// Seed matters for structured model 3 and the random family only.
  PopulationModel build(std::uint64_t seed) const;
  bool depends_on_seed() const;

  /// Short name: toy1..toy3, m1..m3, rand1, rand2.
  std::string name() const;
};

/// Parses toy1|toy2|toy3|m1|m2|m3|rand1|rand2; other fields keep defaults.
ModelRecipe parse_model_name(std::string_view name);

}  // namespace rsda
