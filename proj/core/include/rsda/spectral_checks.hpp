#pragma once

// Numerical checks of classical perturbation results for symmetric matrices.

#include "rsda/linalg.hpp"

namespace rsda {

/// True iff the spectra of A and A + rho v v^T interlace:
/// a'_1 >= a_1 >= a'_2 >= a_2 >= ... >= a'_p >= a_p (tolerance 1e-8, scaled by
/// max(1, ||A|| + rho ||v||^2)).
bool check_weyl(const SymMatrix& a, const Vector& v, double rho);

struct DavisKahanCheck {
  bool applicable = false;  // false when the top-k groups are not separated
  double gap = 0.0;         // z
  double lhs = 0.0;         // ||P - Q||
  double rhs = 0.0;         // ||A - B|| / z
  bool ok = false;          // lhs <= rhs + 1e-8
};

/// Compares the projectors onto the top-k eigenspaces of A and B against the
/// sin-theta bound ||A - B|| / z, where z separates eigenvalues 1..k of both
/// matrices from eigenvalues k+1..p of both.
DavisKahanCheck check_davis_kahan(const SymMatrix& a, const SymMatrix& b, Eigen::Index k);

}  // namespace rsda
