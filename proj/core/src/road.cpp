#include "rsda/road.hpp"

#include "rsda/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace rsda {

namespace {

double soft_threshold(double z, double t) {
  if (z > t) {
    return z - t;
  }
  if (z < -t) {
    return z + t;
  }
  return 0.0;
}

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

RoadProblem::RoadProblem(const SymMatrix& sigma, Vector delta, const RoadOptions& options)
    : delta_(std::move(delta)), sigma_(sigma.matrix()), options_(options) {
  if (sigma.dim() != delta_.size()) {
    throw DimensionError("RoadProblem: sigma and delta differ in dimension");
  }
  if (!delta_.allFinite() || delta_.cwiseAbs().maxCoeff() == 0.0) {
    throw DomainError("RoadProblem: delta must be finite and nonzero");
  }
  const double top = sigma.dim() ? std::max(0.0, sym_eigenvalues_desc(sigma)(0)) : 0.0;
  kappa_ = options_.kappa_scale * (top + 1.0);
  hessian_ = sigma_;
  hessian_.noalias() += kappa_ * delta_ * delta_.transpose();
  linear_ = kappa_ * delta_;
  null_diag_ = 1e-14 * hessian_.diagonal().maxCoeff();
}

double RoadProblem::objective(const Vector& w, double lambda) const {
  const double c = w.dot(delta_) - 1.0;
  return 0.5 * w.dot(sigma_ * w) + lambda * w.lpNorm<1>() + 0.5 * kappa_ * c * c;
}

Vector RoadProblem::gradient(const Vector& w) const { return hessian_ * w - linear_; }

double RoadProblem::kkt_residual(const Vector& w, double lambda) const {
  const Vector g = gradient(w);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const double v = w(j) != 0.0 ? std::abs(g(j) + lambda * sign(w(j)))
                                 : std::max(0.0, std::abs(g(j)) - lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

double RoadProblem::kkt_tolerance(const Vector& w) const {
  const double scale = hessian_.cwiseAbs().maxCoeff() * std::max(1.0, w.lpNorm<1>()) +
                       linear_.cwiseAbs().maxCoeff();
  const double rounding = 16.0 * std::numeric_limits<double>::epsilon() *
                          static_cast<double>(std::max<Eigen::Index>(1, dim())) * scale;
  return std::max(options_.kkt_tolerance, rounding);
}

bool RoadProblem::refine(Vector& w, Vector& grad, double lambda) const {
  const Eigen::Index p = dim();
  const int max_steps = static_cast<int>(4 * p + 20);
  for (int step = 0; step < max_steps; ++step) {
    const double tol = kkt_tolerance(w);
    std::vector<Eigen::Index> support;
    double support_violation = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (w(j) != 0.0) {
        support.push_back(j);
        support_violation = std::max(support_violation, std::abs(grad(j) + lambda * sign(w(j))));
      }
    }
    Vector signs = w.unaryExpr([](double x) { return sign(x); });
    if (support_violation <= tol) {
      Eigen::Index worst = -1;
      double worst_excess = tol;
      for (Eigen::Index j = 0; j < p; ++j) {
        if (w(j) == 0.0 && hessian_(j, j) > null_diag_) {
          const double excess = std::abs(grad(j)) - lambda;
          if (excess > worst_excess) {
            worst_excess = excess;
            worst = j;
          }
        }
      }
      if (worst < 0) {
        return true;
      }
      support.insert(std::lower_bound(support.begin(), support.end(), worst), worst);
      signs(worst) = -sign(grad(worst));
    }
    if (support.empty()) {
      return true;
    }

    const auto s = static_cast<Eigen::Index>(support.size());
    Matrix h(s, s);
    Vector rhs(s);
    Vector current(s);
    for (Eigen::Index a = 0; a < s; ++a) {
      for (Eigen::Index b = 0; b < s; ++b) {
        h(a, b) = hessian_(support[a], support[b]);
      }
      rhs(a) = linear_(support[a]) - lambda * signs(support[a]);
      current(a) = w(support[a]);
    }
    // Minimize the smooth part with the signs fixed. When H restricted to the
    // support is singular and the right-hand side has a null-space component,
    // the restricted objective decreases linearly along that component, so
    // the step follows it to the nearest sign change instead.
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    if (eig.info() != Eigen::Success) {
      return false;
    }
    const Vector& values = eig.eigenvalues();
    const double cutoff = 1e-12 * std::max(values.cwiseAbs().maxCoeff(), 1e-300);
    // kappa d_S lies in the range of H_SS, so the null-space component of
    // the right-hand side is that of -lambda theta_S; projecting the small
    // term alone keeps it clear of the kappa-sized rounding.
    Vector penalty(s);
    for (Eigen::Index a = 0; a < s; ++a) {
      penalty(a) = -lambda * signs(support[a]);
    }
    const Vector coords = eig.eigenvectors().transpose() * rhs;
    const Vector penalty_coords = eig.eigenvectors().transpose() * penalty;
    Vector target = Vector::Zero(s);
    Vector null_part = Vector::Zero(s);
    for (Eigen::Index i = 0; i < s; ++i) {
      if (values(i) > cutoff) {
        target += (coords(i) / values(i)) * eig.eigenvectors().col(i);
      } else {
        null_part += penalty_coords(i) * eig.eigenvectors().col(i);
      }
    }
    if (!target.allFinite()) {
      return false;
    }
    std::vector<double> candidates{1.0};
    if (null_part.norm() > 1e-9 * penalty.norm()) {
      double nearest = std::numeric_limits<double>::infinity();
      Eigen::Index hit = -1;
      for (Eigen::Index a = 0; a < s; ++a) {
        if (current(a) * null_part(a) < 0.0 && -current(a) / null_part(a) < nearest) {
          nearest = -current(a) / null_part(a);
          hit = a;
        }
      }
      if (hit < 0) {
        return false;
      }
      target = current + nearest * null_part;
      target(hit) = 0.0;
    }
    // Discrete line search over the segment current -> target: the objective
    // is piecewise quadratic with kinks where a coordinate crosses zero.
    for (Eigen::Index a = 0; a < s; ++a) {
      if (current(a) != 0.0 && sign(target(a)) != sign(current(a))) {
        candidates.push_back(current(a) / (current(a) - target(a)));
      }
    }
    // Objective changes are evaluated in difference form: along the kappa
    // direction a step worth far less than the objective's rounding can
    // still carry a visible gradient change.
    Vector grad_s(s);
    for (Eigen::Index a = 0; a < s; ++a) {
      grad_s(a) = grad(support[a]);
    }
    double best_change = 0.0;
    Vector best_step;
    for (const double t : candidates) {
      Vector trial(s);
      for (Eigen::Index a = 0; a < s; ++a) {
        const double from = current(a);
        const double to = target(a);
        double v = from + t * (to - from);
        // Land exactly on zero at this coordinate's own crossing point.
        if (from != 0.0 && sign(to) != sign(from) && t == from / (from - to)) {
          v = 0.0;
        }
        trial(a) = v;
      }
      const Vector step = trial - current;
      double l1_change = 0.0;
      for (Eigen::Index a = 0; a < s; ++a) {
        l1_change += std::abs(trial(a)) - std::abs(current(a));
      }
      const double change = grad_s.dot(step) + 0.5 * step.dot(h * step) + lambda * l1_change;
      if (change < best_change) {
        best_change = change;
        best_step = trial;
      }
    }
    if (!(best_change < 0.0)) {
      return false;
    }
    Vector best = w;
    for (Eigen::Index a = 0; a < s; ++a) {
      best(support[a]) = best_step(a);
    }
    w = std::move(best);
    grad = gradient(w);
  }
  return false;
}

RoadFit RoadProblem::fit(double lambda, const Vector* warm_start) const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("RoadProblem::fit: lambda must be finite and non-negative");
  }
  const Eigen::Index p = dim();
  RoadFit out;
  out.lambda = lambda;
  Vector w = Vector::Zero(p);
  if (warm_start != nullptr) {
    if (warm_start->size() != p) {
      throw DimensionError("RoadProblem::fit: warm start has the wrong length");
    }
    w = *warm_start;
  }
  for (Eigen::Index j = 0; j < p; ++j) {
    if (hessian_(j, j) <= null_diag_) {
      w(j) = 0.0;
    }
  }
  Vector grad = gradient(w);

  while (true) {
    bool batch_converged = false;
    for (int sweep = 0; sweep < options_.sweeps_per_refinement && out.sweeps < options_.max_sweeps;
         ++sweep) {
      double max_change = 0.0;
      for (Eigen::Index j = 0; j < p; ++j) {
        const double hjj = hessian_(j, j);
        if (hjj <= null_diag_) {
          continue;
        }
        const double old = w(j);
        const double updated = soft_threshold(hjj * old - grad(j), lambda) / hjj;
        const double change = updated - old;
        if (change != 0.0) {
          w(j) = updated;
          grad.noalias() += change * hessian_.col(j);
          max_change = std::max(max_change, std::abs(change));
        }
      }
      ++out.sweeps;
      out.last_change = max_change;
      if (max_change <= options_.tolerance) {
        batch_converged = true;
        break;
      }
    }
    grad = gradient(w);
    ++out.refinements;
    const bool refined = refine(w, grad, lambda);
    const double residual = kkt_residual(w, lambda);
    if (residual <= kkt_tolerance(w)) {
      out.w = std::move(w);
      out.kkt_residual = residual;
      return out;
    }
    if (out.sweeps >= options_.max_sweeps || (batch_converged && !refined)) {
      std::ostringstream msg;
      msg << "ROAD coordinate descent did not converge: lambda=" << lambda
          << ", sweeps=" << out.sweeps << ", last max change=" << out.last_change
          << ", KKT residual=" << residual;
      throw ConvergenceError(msg.str());
    }
  }
}

}  // namespace rsda
