#include "rsda/rho_selection.hpp"

#include "rsda/errors.hpp"
#include "rsda/folds.hpp"

#include <algorithm>
#include <cmath>

namespace rsda {

std::vector<double> default_rho_grid() {
  constexpr int points = 15;
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = std::pow(10.0, -3.0 + 4.0 * i / (points - 1));
  }
  return grid;
}

RhoSelection select_rho(const LabeledDataset& data, const std::vector<double>& rho_grid,
                        const SolverConfig& base, int k, std::uint64_t seed) {
  if (rho_grid.empty()) {
    throw ValidationError("select_rho: rho grid is empty");
  }
  std::vector<double> grid = rho_grid;
  for (const double rho : grid) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      throw DomainError("select_rho: rho values must be positive and finite");
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  RhoSelection out;
  out.rho_star = grid.front();
  const int folds = usable_folds(data, k);
  if (grid.size() == 1 || folds < 2) {
    return out;
  }
  out.folds_used = folds;
  const FoldPlan plan = make_folds(data, folds, seed, true);
  double best = 2.0;
  for (const double rho : grid) {
    const double error = cv_error(data, plan, [&](const LabeledDataset& train) -> AnyRule {
      return rotate_and_solve(train, rho, base, true);
    });
    out.curve.emplace_back(rho, error);
    if (error < best) {
      best = error;
      out.rho_star = rho;
    }
  }
  return out;
}

}  // namespace rsda
