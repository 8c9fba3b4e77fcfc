#pragma once

// Linear discriminant rules and the rotate-and-solve wrapper.

#include "rsda/dataset.hpp"
#include "rsda/estimation.hpp"
#include "rsda/population.hpp"
#include "rsda/road.hpp"
#include "rsda/rules.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace rsda {

enum class Method { oracle, lda_pseudo, ir, nsc, road };

std::string_view to_string(Method method);
/// Accepts oracle, lda (also lda_pseudo), ir, nsc, road.
Method method_from_string(std::string_view text);

struct SolverConfig {
  Method method = Method::road;
  /// Tuning grid (lambda for ROAD, shrinkage for NSC). Empty selects the
  /// data-driven default.
  std::vector<double> grid;
  int folds = 5;
  std::uint64_t seed = 0;
  double pinv_tol = 1e-10;
  std::optional<double> nsc_s0;  // overrides the median rule
  RoadOptions road;

  /// Throws ValidationError for folds < 2 or grid entries out of range.
  void validate() const;
};

/// One grid point of a cross-validation curve. Points where some fold could
/// not produce a rule are kept with usable = false.
struct TuningPoint {
  double value = 0.0;
  double cv_error = 1.0;
  bool usable = false;
};

struct TunedRule {
  LinearRule rule;
  double tuning = 0.0;
  std::vector<TuningPoint> curve;  // grid order
  int folds_used = 0;              // 0 when no cross-validation ran
};

/// omega = Sigma^-1 delta, nu = midpoint. Throws DomainError when Sigma is
/// singular (use lda_pseudo on estimated moments instead).
LinearRule fisher_oracle(const PopulationModel& model);

/// omega = pinv(Sigma_hat) delta_hat, nu = mu_hat.
LinearRule lda_pseudo(const EstimatedMoments& m, double rel_tol = 1e-10);

/// omega_j = delta_hat_j / Sigma_hat_jj, with the variances floored at
/// 1e-12 * max(1, max_j Sigma_hat_jj).
LinearRule independence_rule(const EstimatedMoments& m);

/// Standardized centroid differences d_j = delta_hat_j / (m (s_j + s0)) with
/// s_j^2 = Sigma_hat_jj and m = sqrt(1/n1 + 1/n2).
struct NscStatistics {
  Vector d;
  Vector scale;  // s_j + s0, floored like independence_rule
  double s0 = 0.0;
  double m = 0.0;
};

NscStatistics nsc_statistics(const EstimatedMoments& moments, std::optional<double> s0 = {});

/// Rule at a single shrinkage: omega_j = m soft(d_j, shrinkage) / (s_j + s0).
LinearRule nsc_fit(const EstimatedMoments& moments, double shrinkage,
                   std::optional<double> s0 = {});

/// linspace(0, max_j |d_j|, 30)
std::vector<double> default_nsc_grid(const EstimatedMoments& moments,
                                     std::optional<double> s0 = {});

/// Shrinkage chosen by stratified CV accuracy, ties to the larger value.
TunedRule nsc_train(const LabeledDataset& data, const std::vector<double>& shrinkage_grid,
                    int folds, std::uint64_t seed, std::optional<double> s0 = {});

/// Single-lambda ROAD rule; DegenerateRuleError when the fit is zero.
LinearRule road_fit(const EstimatedMoments& m, double lambda, const RoadOptions& options = {});

/// logspace(1e-4 lambda_bar, lambda_bar, 20) with lambda_bar = |delta_hat|_inf.
std::vector<double> default_road_grid(const EstimatedMoments& m);

/// Lambda chosen by stratified CV accuracy, ties to the larger value. A
/// lambda whose fit fails or is zero in any fold is skipped.
TunedRule road_train(const LabeledDataset& data, const std::vector<double>& lambda_grid,
                     int folds, std::uint64_t seed, const RoadOptions& options = {});

/// Trains the configured method on the data. The oracle method needs a
/// population model and is rejected here.
LinearRule train_linear(const LabeledDataset& data, const SolverConfig& config);

/// Rotates by the full or economy eigenbasis of Sigma_hat + rho delta_hat
/// delta_hat^T and trains the base method on the rotated data.
RSRule rotate_and_solve(const LabeledDataset& data, double rho, const SolverConfig& base,
                        bool economy);

/// Same with a caller-supplied basis.
RSRule rotate_and_solve(const LabeledDataset& data, const RotationBasis& basis,
                        const SolverConfig& base);

}  // namespace rsda
