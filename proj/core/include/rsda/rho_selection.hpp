#pragma once

// Cross-validated choice of the rotation parameter rho.

#include "rsda/classifiers.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace rsda {

struct RhoSelection {
  double rho_star = 0.0;
  std::vector<std::pair<double, double>> curve;  // (rho, cv error), ascending rho
  int folds_used = 0;
};

/// logspace(1e-3, 10, 15)
std::vector<double> default_rho_grid();

/// Stratified k-fold CV of rotate-and-solve with the economy rotation
/// re-estimated on every training fold. Duplicate grid values are merged;
/// ties go to the smaller rho. k is clamped to the class sizes; with fewer
/// than two usable folds the smallest grid value is returned with an empty
/// curve.
RhoSelection select_rho(const LabeledDataset& data, const std::vector<double>& rho_grid,
                        const SolverConfig& base, int k, std::uint64_t seed);

}  // namespace rsda
