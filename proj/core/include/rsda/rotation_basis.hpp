#pragma once

#include "rsda/linalg.hpp"

#include <string_view>

namespace rsda {

enum class BasisKind { full, economy };

std::string_view to_string(BasisKind kind);
BasisKind basis_kind_from_string(std::string_view text);

/// Orthonormal columns (p x r) from an eigendecomposition of
/// Sigma + rho * delta delta^T, together with the matching eigenvalues.
struct RotationBasis {
  Matrix columns;
  Vector eigenvalues;
  double rho = 0.0;
  BasisKind kind = BasisKind::full;

  Eigen::Index dim() const { return columns.rows(); }
  Eigen::Index rank() const { return columns.cols(); }

  /// Throws ValidationError unless columns are orthonormal within 1e-8 and
  /// eigenvalues (when present) are descending and >= -1e-10.
  void validate() const;

  /// Identity basis of dimension p, kind full, rho 0. Rotating by it is a
  /// no-op.
  static RotationBasis identity(Eigen::Index p);
};

}  // namespace rsda
