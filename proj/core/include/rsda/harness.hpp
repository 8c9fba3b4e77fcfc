#pragma once

// Seeded Gaussian sampling, replicated Monte-Carlo experiments and the
// diagnostic sweeps built on them.

#include "rsda/classifiers.hpp"
#include "rsda/models.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rsda {

/// Draws x = mu_class + L z with L the symmetric square root of Sigma
/// (negative eigenvalues clipped to zero), so singular Sigma is fine.
class GaussianSampler {
 public:
  explicit GaussianSampler(const PopulationModel& model);

  /// First n1 rows are class 1, the remaining n2 rows class 2.
  LabeledDataset draw(Eigen::Index n1, Eigen::Index n2, std::uint64_t seed) const;
  const Matrix& root() const { return root_; }

 private:
  Vector mu1_;
  Vector mu2_;
  Matrix root_;
};

LabeledDataset sample(const PopulationModel& model, Eigen::Index n1, Eigen::Index n2,
                      std::uint64_t seed);

enum class RotationMode { none, full, economy, oracle };

/// Method names: oracle, <base>, rs-<base> (full rotation), rs-<base>-econ
/// (economy rotation) and o-rs-<base> (rotation by the population
/// eigenvectors), with <base> one of lda, ir, nsc, road.
struct MethodSpec {
  std::string name;
  Method base = Method::road;
  RotationMode rotation = RotationMode::none;
  std::optional<double> rho;  // overrides the experiment's rho policy

  bool rotated() const { return rotation != RotationMode::none; }
};

MethodSpec parse_method(std::string_view name);
std::vector<MethodSpec> parse_methods(std::string_view comma_list);

/// A fixed rho, or cross-validation over `grid` (default_rho_grid when empty).
struct RhoPolicy {
  std::optional<double> fixed = 0.5;
  std::vector<double> grid;
};

struct ExperimentSpec {
  ModelRecipe model;
  Eigen::Index n1 = 20;
  Eigen::Index n2 = 20;
  Eigen::Index n_test1 = 0;  // 0: same as n1
  Eigen::Index n_test2 = 0;  // 0: same as n2
  std::vector<MethodSpec> methods;
  int replicates = 100;
  std::uint64_t master_seed = 0;
  RhoPolicy rho;
  int cv_folds = 5;
  /// Rebuild the population model for every replicate. Only changes
  /// anything for seed-dependent recipes.
  bool redraw_model = false;
  int threads = 0;  // 0: hardware concurrency

  Eigen::Index test1() const { return n_test1 > 0 ? n_test1 : n1; }
  Eigen::Index test2() const { return n_test2 > 0 ? n_test2 : n2; }

  /// Throws ValidationError on an unusable spec.
  void validate() const;
};

struct MethodResult {
  std::string name;
  std::vector<std::optional<double>> errors;       // per replicate; empty on failure
  std::vector<std::optional<double>> selected_rho; // per replicate, rho policy cv only
  std::vector<std::string> failures;               // "replicate i: message"
  double mean = 0.0;  // over successful replicates
  double std = 0.0;   // n - 1 divisor; 0 for a single value
  int failure_count = 0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<MethodResult> methods;  // spec order
  /// Bayes error of the population model when it is shared by all replicates.
  std::optional<double> bayes_error;
  double runtime_seconds = 0.0;

  /// Throws ValidationError for an unknown name.
  const MethodResult& method(std::string_view name) const;
};

/// Mean and sample standard deviation of the present values.
void summarize(MethodResult& result);

/// Replicate i draws its training set from derive_seed(master, i, train) and
/// its test set from derive_seed(master, i, test); every method sees the same
/// data and the same method seed, so results do not depend on method order.
/// Method failures are recorded, not thrown.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Cumulative-energy curves of beta, U^T beta (population rotation) and the
/// replicate average of U_hat^T beta.
struct SparsityCurves {
  Vector raw;
  Vector oracle;
  Vector empirical;
};

SparsityCurves sparsity_diagnostic(const PopulationModel& model, double rho, Eigen::Index n1,
                                   Eigen::Index n2, int replicates, std::uint64_t seed);

struct SweepRow {
  double grid = 0.0;
  std::string method;
  double mean = 0.0;
  double std = 0.0;
  int failures = 0;
};

/// Every rotated method in the spec runs once per rho; unrotated methods run
/// once and are repeated on every row. All cells share the replicate seeds.
std::vector<SweepRow> rho_sweep(const ExperimentSpec& spec, const std::vector<double>& rho_grid);

/// The spec's random-family model at each sparsity level, redrawn per
/// replicate. Levels share the master seed.
std::vector<SweepRow> sparsity_sweep(const ExperimentSpec& spec,
                                     const std::vector<double>& levels);

}  // namespace rsda
