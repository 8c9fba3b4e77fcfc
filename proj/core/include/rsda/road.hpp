#pragma once

// Penalized ROAD direction:
//
//   minimize  1/2 w^T S w + lambda |w|_1 + kappa/2 (w^T d - 1)^2
//
// solved by cyclic coordinate descent with soft-threshold updates. A large
// kappa makes plain coordinate descent crawl along the constraint, so every
// batch of sweeps is followed by an active-set (feature-sign) refinement on
// the current support; the fit terminates once the subgradient optimality
// conditions hold.

#include "rsda/linalg.hpp"

namespace rsda {

struct RoadOptions {
  double kappa_scale = 1e4;  // kappa = kappa_scale * (lambda_max(S) + 1)
  double tolerance = 1e-8;   // max coordinate change that ends a CD batch
  int max_sweeps = 10000;
  int sweeps_per_refinement = 20;
  double kkt_tolerance = 1e-9;  // floor; raised to the rounding level of the problem
};

struct RoadFit {
  Vector w;
  double lambda = 0.0;
  int sweeps = 0;
  int refinements = 0;
  double last_change = 0.0;
  double kkt_residual = 0.0;
};

class RoadProblem {
 public:
  RoadProblem(const SymMatrix& sigma, Vector delta, const RoadOptions& options = {});

  Eigen::Index dim() const { return delta_.size(); }
  double kappa() const { return kappa_; }
  const Vector& delta() const { return delta_; }

  double objective(const Vector& w, double lambda) const;
  /// Gradient of the smooth part: S w + kappa (w^T d - 1) d.
  Vector gradient(const Vector& w) const;
  /// Largest violation of the subgradient conditions at w.
  double kkt_residual(const Vector& w, double lambda) const;
  /// Tolerance used to accept a fit.
  double kkt_tolerance(const Vector& w) const;

  /// Throws ConvergenceError (with lambda, sweeps and the last change) when
  /// the sweep budget runs out before the optimality conditions hold.
  RoadFit fit(double lambda, const Vector* warm_start = nullptr) const;

 private:
  bool refine(Vector& w, Vector& grad, double lambda) const;

  Matrix hessian_;  // S + kappa d d^T
  Vector linear_;   // kappa d
  Vector delta_;
  Matrix sigma_;
  double kappa_ = 0.0;
  double null_diag_ = 0.0;
  RoadOptions options_;
};

}  // namespace rsda
