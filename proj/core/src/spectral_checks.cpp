#include "rsda/spectral_checks.hpp"

#include "rsda/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rsda {

bool check_weyl(const SymMatrix& a, const Vector& v, double rho) {
  if (v.size() != a.dim()) {
    throw DimensionError("check_weyl: vector length differs from matrix dimension");
  }
  if (!(rho > 0.0)) {
    throw DomainError("check_weyl: rho must be positive");
  }
  const Vector alpha = sym_eigenvalues_desc(a);
  const Vector updated =
      sym_eigenvalues_desc(SymMatrix::symmetrized(a.matrix() + rho * v * v.transpose()));
  const double scale = std::max(1.0, operator_norm(a.matrix()) + rho * v.squaredNorm());
  const double tol = 1e-8 * scale;
  const Eigen::Index p = a.dim();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (updated(j) < alpha(j) - tol) {
      return false;
    }
    if (j + 1 < p && alpha(j) < updated(j + 1) - tol) {
      return false;
    }
  }
  return true;
}

DavisKahanCheck check_davis_kahan(const SymMatrix& a, const SymMatrix& b, Eigen::Index k) {
  if (a.dim() != b.dim()) {
    throw DimensionError("check_davis_kahan: matrices differ in dimension");
  }
  const Eigen::Index p = a.dim();
  if (k < 1 || k >= p) {
    throw DomainError("check_davis_kahan: split index must satisfy 1 <= k < p");
  }
  const EigenSystem ea = sym_eig_desc(a);
  const EigenSystem eb = sym_eig_desc(b);

  DavisKahanCheck out;
  // S = {1..k}: the interval [s, t] spans the top-k eigenvalues of both
  // matrices and every remaining eigenvalue sits at or below s - z.
  const double lower_top = std::min(ea.values(k - 1), eb.values(k - 1));
  const double upper_rest = std::max(ea.values(k), eb.values(k));
  out.gap = lower_top - upper_rest;
  if (!(out.gap > 0.0)) {
    return out;
  }
  out.applicable = true;
  const Matrix pa = projector(ea.vectors.leftCols(k));
  const Matrix pb = projector(eb.vectors.leftCols(k));
  out.lhs = operator_norm(pa - pb);
  out.rhs = operator_norm(a.matrix() - b.matrix()) / out.gap;
  out.ok = out.lhs <= out.rhs + 1e-8;
  return out;
}

}  // namespace rsda
