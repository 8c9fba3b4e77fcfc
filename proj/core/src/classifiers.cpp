#include "rsda/classifiers.hpp"

#include "rsda/errors.hpp"
#include "rsda/folds.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace rsda {

namespace {

double soft_threshold(double z, double t) {
  return z > t ? z - t : (z < -t ? z + t : 0.0);
}

double variance_floor(const Vector& diag) {
  return 1e-12 * std::max(1.0, diag.size() ? diag.maxCoeff() : 0.0);
}

// Fits every grid value on one training fold; a missing entry marks a value
// that produced no usable rule.
using PathFitter = std::function<std::vector<std::optional<LinearRule>>(const LabeledDataset&)>;

struct GridChoice {
  std::size_t index = 0;
  std::vector<TuningPoint> curve;
  int folds_used = 0;
};

// Stratified CV over a grid. Ties go to the larger grid value.
GridChoice choose_by_cv(const LabeledDataset& data, const std::vector<double>& grid, int folds,
                        std::uint64_t seed, const PathFitter& fit_path, const char* what) {
  GridChoice choice;
  choice.curve.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    choice.curve[g].value = grid[g];
  }
  const int k = usable_folds(data, folds);
  if (grid.size() == 1 || k < 2) {
    // Nothing to compare, or too few samples per class to split: the caller
    // fits the largest usable grid value on the full data.
    for (auto& point : choice.curve) {
      point.usable = true;
      point.cv_error = std::numeric_limits<double>::quiet_NaN();
    }
    choice.index = static_cast<std::size_t>(
        std::max_element(grid.begin(), grid.end()) - grid.begin());
    return choice;
  }
  choice.folds_used = k;
  const FoldPlan plan = make_folds(data, k, seed, true);
  std::vector<Eigen::Index> mistakes(grid.size(), 0);
  std::vector<bool> usable(grid.size(), true);
  for (const Fold& fold : plan.folds) {
    const LabeledDataset train = data.subset(fold.train);
    const LabeledDataset validation = data.subset(fold.validation);
    const auto rules = fit_path(train);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (!rules[g]) {
        usable[g] = false;
        continue;
      }
      const auto predicted = predict_rows(AnyRule(*rules[g]), validation.features());
      for (std::size_t i = 0; i < predicted.size(); ++i) {
        mistakes[g] += predicted[i] != validation.labels()[i] ? 1 : 0;
      }
    }
  }
  bool found = false;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    auto& point = choice.curve[g];
    point.usable = usable[g];
    point.cv_error = static_cast<double>(mistakes[g]) / static_cast<double>(data.size());
    if (!usable[g]) {
      continue;
    }
    if (!found) {
      choice.index = g;
      found = true;
      continue;
    }
    const auto best = choice.index;
    if (mistakes[g] < mistakes[best] || (mistakes[g] == mistakes[best] && grid[g] > grid[best])) {
      choice.index = g;
    }
  }
  if (!found) {
    throw DegenerateRuleError(std::string(what) +
                              ": no grid value produced a usable rule in every fold");
  }
  return choice;
}

std::vector<std::size_t> descending_order(const std::vector<double>& grid) {
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });
  return order;
}

void check_grid(const std::vector<double>& grid, bool strictly_positive, const char* what) {
  if (grid.empty()) {
    throw ValidationError(std::string(what) + ": tuning grid is empty");
  }
  for (const double v : grid) {
    if (!std::isfinite(v) || v < 0.0 || (strictly_positive && v == 0.0)) {
      std::ostringstream msg;
      msg << what << ": invalid grid value " << v;
      throw ValidationError(msg.str());
    }
  }
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::oracle:
      return "oracle";
    case Method::lda_pseudo:
      return "lda";
    case Method::ir:
      return "ir";
    case Method::nsc:
      return "nsc";
    case Method::road:
      return "road";
  }
  return "unknown";
}

Method method_from_string(std::string_view text) {
  if (text == "oracle") return Method::oracle;
  if (text == "lda" || text == "lda_pseudo" || text == "lda-pseudo") return Method::lda_pseudo;
  if (text == "ir") return Method::ir;
  if (text == "nsc") return Method::nsc;
  if (text == "road") return Method::road;
  throw ValidationError("unknown method '" + std::string(text) + "'");
}

void SolverConfig::validate() const {
  if (folds < 2) {
    throw ValidationError("SolverConfig: folds must be at least 2");
  }
  if (!grid.empty()) {
    check_grid(grid, method == Method::road, "SolverConfig");
  }
  if (nsc_s0 && (!std::isfinite(*nsc_s0) || *nsc_s0 < 0.0)) {
    throw ValidationError("SolverConfig: nsc_s0 must be finite and non-negative");
  }
}

LinearRule fisher_oracle(const PopulationModel& model) {
  const OracleQuantities q = oracle_quantities(model);
  if (q.used_pseudo_inverse) {
    throw DomainError(
        "fisher_oracle: population covariance is singular; use lda_pseudo on estimated moments");
  }
  return LinearRule(q.beta, model.midpoint());
}

LinearRule lda_pseudo(const EstimatedMoments& m, double rel_tol) {
  const SymMatrix inv = pseudo_inverse(m.sigma, rel_tol);
  return LinearRule(inv.matrix() * m.delta, m.mu);
}

LinearRule independence_rule(const EstimatedMoments& m) {
  const Vector diag = m.sigma.matrix().diagonal();
  const Vector floored = diag.cwiseMax(variance_floor(diag));
  return LinearRule(m.delta.cwiseQuotient(floored), m.mu);
}

NscStatistics nsc_statistics(const EstimatedMoments& moments, std::optional<double> s0) {
  NscStatistics stats;
  const Vector diag = moments.sigma.matrix().diagonal().cwiseMax(0.0);
  const Vector s = diag.cwiseSqrt();
  if (s0) {
    stats.s0 = *s0;
  } else if (s.size() > 0) {
    std::vector<double> sorted(s.data(), s.data() + s.size());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    stats.s0 = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  }
  stats.m = std::sqrt(1.0 / static_cast<double>(moments.n1) +
                      1.0 / static_cast<double>(moments.n2));
  stats.scale = (s.array() + stats.s0).cwiseMax(std::sqrt(variance_floor(diag))).matrix();
  stats.d = moments.delta.cwiseQuotient(stats.m * stats.scale);
  return stats;
}

LinearRule nsc_fit(const EstimatedMoments& moments, double shrinkage, std::optional<double> s0) {
  if (!(shrinkage >= 0.0) || !std::isfinite(shrinkage)) {
    throw DomainError("nsc_fit: shrinkage must be finite and non-negative");
  }
  const NscStatistics stats = nsc_statistics(moments, s0);
  Vector omega(stats.d.size());
  for (Eigen::Index j = 0; j < omega.size(); ++j) {
    omega(j) = stats.m * soft_threshold(stats.d(j), shrinkage) / stats.scale(j);
  }
  return LinearRule(std::move(omega), moments.mu);
}

std::vector<double> default_nsc_grid(const EstimatedMoments& moments, std::optional<double> s0) {
  const NscStatistics stats = nsc_statistics(moments, s0);
  const double top = stats.d.size() ? stats.d.cwiseAbs().maxCoeff() : 0.0;
  constexpr int points = 30;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = top * i / (points - 1);
  }
  return grid;
}

TunedRule nsc_train(const LabeledDataset& data, const std::vector<double>& shrinkage_grid,
                    int folds, std::uint64_t seed, std::optional<double> s0) {
  const EstimatedMoments full = estimate_moments(data);
  const std::vector<double> grid =
      shrinkage_grid.empty() ? default_nsc_grid(full, s0) : shrinkage_grid;
  check_grid(grid, false, "nsc_train");
  const PathFitter fit_path = [&](const LabeledDataset& train) {
    const EstimatedMoments m = estimate_moments(train);
    std::vector<std::optional<LinearRule>> rules(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      try {
        rules[g] = nsc_fit(m, grid[g], s0);
      } catch (const DegenerateRuleError&) {
      }
    }
    return rules;
  };
  GridChoice choice = choose_by_cv(data, grid, folds, seed, fit_path, "nsc_train");
  if (choice.folds_used == 0) {
    // Without CV, take the largest shrinkage that still leaves a feature.
    const auto rules = fit_path(data);
    bool found = false;
    for (const std::size_t g : descending_order(grid)) {
      if (rules[g]) {
        choice.index = g;
        found = true;
        break;
      }
    }
    if (!found) {
      throw DegenerateRuleError("nsc_train: every feature is shrunk to zero at every grid value");
    }
  }
  return TunedRule{nsc_fit(full, grid[choice.index], s0), grid[choice.index],
                   std::move(choice.curve), choice.folds_used};
}

LinearRule road_fit(const EstimatedMoments& m, double lambda, const RoadOptions& options) {
  const RoadProblem problem(m.sigma, m.delta, options);
  RoadFit fit = problem.fit(lambda);
  if (fit.w.cwiseAbs().maxCoeff() == 0.0) {
    std::ostringstream msg;
    msg << "road_fit: lambda=" << lambda << " shrinks the direction to zero";
    throw DegenerateRuleError(msg.str());
  }
  return LinearRule(std::move(fit.w), m.mu);
}

std::vector<double> default_road_grid(const EstimatedMoments& m) {
  const double bar = m.delta.cwiseAbs().maxCoeff();
  if (!(bar > 0.0)) {
    throw DomainError("default_road_grid: delta_hat is zero");
  }
  constexpr int points = 20;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = bar * std::pow(10.0, -4.0 + 4.0 * i / (points - 1));
  }
  return grid;
}

TunedRule road_train(const LabeledDataset& data, const std::vector<double>& lambda_grid,
                     int folds, std::uint64_t seed, const RoadOptions& options) {
  const EstimatedMoments full = estimate_moments(data);
  if (full.delta.cwiseAbs().maxCoeff() == 0.0) {
    throw DomainError("road_train: delta_hat is zero");
  }
  const std::vector<double> grid = lambda_grid.empty() ? default_road_grid(full) : lambda_grid;
  check_grid(grid, true, "road_train");
  const auto order = descending_order(grid);
  // Warm-started path from the largest lambda down.
  const PathFitter fit_path = [&](const LabeledDataset& train) {
    std::vector<std::optional<LinearRule>> rules(grid.size());
    const EstimatedMoments m = estimate_moments(train);
    if (m.delta.cwiseAbs().maxCoeff() == 0.0) {
      return rules;
    }
    const RoadProblem problem(m.sigma, m.delta, options);
    std::optional<Vector> warm;
    for (const std::size_t g : order) {
      try {
        RoadFit fit = problem.fit(grid[g], warm ? &*warm : nullptr);
        warm = fit.w;
        if (fit.w.cwiseAbs().maxCoeff() > 0.0) {
          rules[g] = LinearRule(std::move(fit.w), m.mu);
        }
      } catch (const ConvergenceError&) {
        warm.reset();
      }
    }
    return rules;
  };
  GridChoice choice = choose_by_cv(data, grid, folds, seed, fit_path, "road_train");
  if (choice.folds_used == 0) {
    const auto rules = fit_path(data);
    bool found = false;
    for (const std::size_t g : order) {
      if (rules[g]) {
        choice.index = g;
        found = true;
        break;
      }
    }
    if (!found) {
      throw DegenerateRuleError("road_train: every lambda shrinks the direction to zero");
    }
  }
  return TunedRule{road_fit(full, grid[choice.index], options), grid[choice.index],
                   std::move(choice.curve), choice.folds_used};
}

LinearRule train_linear(const LabeledDataset& data, const SolverConfig& config) {
  config.validate();
  switch (config.method) {
    case Method::oracle:
      throw DomainError("train_linear: the oracle rule needs the population model");
    case Method::lda_pseudo:
      return lda_pseudo(estimate_moments(data), config.pinv_tol);
    case Method::ir:
      return independence_rule(estimate_moments(data));
    case Method::nsc:
      return nsc_train(data, config.grid, config.folds, config.seed, config.nsc_s0).rule;
    case Method::road:
      return road_train(data, config.grid, config.folds, config.seed, config.road).rule;
  }
  throw DomainError("train_linear: unknown method");
}

RSRule rotate_and_solve(const LabeledDataset& data, double rho, const SolverConfig& base,
                        bool economy) {
  if (base.method == Method::oracle) {
    throw DomainError("rotate_and_solve: base method cannot be the oracle");
  }
  RotationBasis basis = economy ? rotation_economy(data, rho).basis
                                : rotation_full(estimate_moments(data), rho);
  return rotate_and_solve(data, basis, base);
}

RSRule rotate_and_solve(const LabeledDataset& data, const RotationBasis& basis,
                        const SolverConfig& base) {
  if (base.method == Method::oracle) {
    throw DomainError("rotate_and_solve: base method cannot be the oracle");
  }
  if (basis.dim() != data.dim()) {
    std::ostringstream msg;
    msg << "rotate_and_solve: basis has dimension " << basis.dim() << ", data has "
        << data.dim();
    throw DimensionError(msg.str());
  }
  LinearRule inner = train_linear(rotate_dataset(data, basis), base);
  return RSRule(basis, std::move(inner));
}

}  // namespace rsda
