#pragma once

#include "rsda/linalg.hpp"
#include "rsda/rotation_basis.hpp"

#include <optional>

namespace rsda {

/// Two Gaussian classes N(mu1, sigma) and N(mu2, sigma) with equal priors.
class PopulationModel {
 public:
  /// Throws DimensionError on size mismatch and ValidationError when sigma
  /// has an eigenvalue below -1e-10.
  PopulationModel(Vector mu1, Vector mu2, SymMatrix sigma);

  const Vector& mu1() const { return mu1_; }
  const Vector& mu2() const { return mu2_; }
  const SymMatrix& sigma() const { return sigma_; }
  Eigen::Index dim() const { return mu1_.size(); }

  Vector delta() const { return mu1_ - mu2_; }
  Vector midpoint() const { return 0.5 * (mu1_ + mu2_); }

 private:
  Vector mu1_;
  Vector mu2_;
  SymMatrix sigma_;
};

struct OracleQuantities {
  Vector delta;
  Vector beta;          // sigma^-1 delta
  double gamma = 0.0;   // delta^T beta
  double bayes_error = 0.5;
  bool used_pseudo_inverse = false;  // sigma was numerically singular
};

OracleQuantities oracle_quantities(const PopulationModel& model);

/// Full eigenbasis of Sigma + rho * delta delta^T, eigenvalues descending.
RotationBasis oracle_rotation(const PopulationModel& model, double rho = 0.5);

/// Spike-structure quantities for a split after the k-th eigenvalue of sigma.
struct SpikeStructureReport {
  Eigen::Index k = 0;
  double d = 0.0;        // lambda_k - lambda_{k+1}
  double epsilon = 0.0;  // lambda_{k+1} - lambda_p
  double d_tilde = 0.0;  // d rho |delta_2|^2 / (d + rho |delta|^2)
  double c_k = 0.0;      // +inf when d_tilde - 2 epsilon <= 0
  double delta1_norm = 0.0;
  double delta2_norm = 0.0;
  /// Least K with delta inside the span of the top-K eigenvectors.
  std::optional<Eigen::Index> big_k;
  /// min_{1 <= j < K} C_j; +inf when K <= 1 or unavailable.
  double c_min = 0.0;
  /// min(c_min, sqrt(K)); the l1/l2 bound on U^T beta.
  double ratio_bound = 0.0;
};

SpikeStructureReport spike_report(const PopulationModel& model, double rho, Eigen::Index k);

/// Sparsity summary of a coefficient vector.
struct SparsityProfile {
  Eigen::Index l0 = 0;      // entries with |e| > 1e-8 * ||e||_2
  double l1_l2_ratio = 0.0;
  /// cumulative_energy[j] = share of ||e||^2 in the j+1 largest |entries|.
  Vector cumulative_energy;
};

SparsityProfile sparsity_profile(const Vector& coefficients);

/// Profile of basis^T beta for the model's Fisher direction beta.
SparsityProfile rotated_beta_profile(const PopulationModel& model, const RotationBasis& basis);

struct Theorem3Report {
  bool applicable = false;   // false when lambda_{k+1}(sigma) <= 0
  double a_value = 0.0;      // lambda_{k+1}(A) / lambda_{k+1}(sigma)
  double energy_ratio = 1.0; // ||U1^T delta|| / ||delta||
  double gamma1 = 0.0;
  double gamma = 0.0;
  double energy_bound = 0.0;  // (a-2)/(a-1) when a > 2
  double gamma1_bound = 0.0;  // (a-2)^2 / ((a-1)^2 lambda_1) ||delta||^2
  bool bounds_ok = true;
};

/// Energy preserved by the top k+1 eigenvectors U1 of Sigma + rho delta delta^T.
/// A = sum_{i<=k} lambda_i xi_i xi_i^T + rho delta delta^T; when a_value > 2
/// both lower bounds are checked with 1e-8 slack, otherwise the check is
/// vacuous.
Theorem3Report theorem3_check(const PopulationModel& model, double rho, Eigen::Index k);

}  // namespace rsda
