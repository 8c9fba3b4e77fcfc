#pragma once

#include "rsda/dataset.hpp"
#include "rsda/linalg.hpp"
#include "rsda/rotation_basis.hpp"

#include <variant>
#include <vector>

namespace rsda {

/// Affine half-space rule: class 1 iff (x - nu)^T omega >= 0.
class LinearRule {
 public:
  /// Throws DegenerateRuleError when omega is all zero, DimensionError on a
  /// size mismatch and ValidationError on non-finite entries.
  LinearRule(Vector omega, Vector nu);

  const Vector& omega() const { return omega_; }
  const Vector& nu() const { return nu_; }
  Eigen::Index dim() const { return omega_.size(); }

  double score(const Vector& x) const;

 private:
  Vector omega_;
  Vector nu_;
};

/// A linear rule fitted in rotated coordinates basis^T x.
struct RSRule {
  RotationBasis basis;
  LinearRule inner;

  RSRule(RotationBasis basis, LinearRule inner);
  Eigen::Index dim() const { return basis.dim(); }
};

using AnyRule = std::variant<LinearRule, RSRule>;

/// Boundary points (score exactly 0) go to class 1.
Label predict(const LinearRule& rule, const Vector& x);
Label rs_predict(const RSRule& rule, const Vector& x);
Label predict(const AnyRule& rule, const Vector& x);

Eigen::Index rule_dim(const AnyRule& rule);

std::vector<Label> predict_rows(const AnyRule& rule, const Matrix& rows);

/// Fraction of rows whose prediction differs from the label.
double misclassification_rate(const AnyRule& rule, const LabeledDataset& data);

}  // namespace rsda
