#include "rsda/rotation_basis.hpp"

#include "rsda/errors.hpp"

#include <algorithm>
#include <sstream>
#include <string>

namespace rsda {

std::string_view to_string(BasisKind kind) { return kind == BasisKind::full ? "full" : "economy"; }

BasisKind basis_kind_from_string(std::string_view text) {
  if (text == "full") {
    return BasisKind::full;
  }
  if (text == "economy") {
    return BasisKind::economy;
  }
  throw ValidationError("unknown basis kind '" + std::string(text) + "'");
}

void RotationBasis::validate() const {
  if (!columns.allFinite()) {
    throw ValidationError("rotation basis has non-finite entries");
  }
  const Matrix gram = columns.transpose() * columns;
  const double dev = max_abs(gram - Matrix::Identity(gram.rows(), gram.cols()));
  if (dev > 1e-8) {
    std::ostringstream msg;
    msg << "rotation basis columns are not orthonormal (max |U^T U - I| = " << dev << ")";
    throw ValidationError(msg.str());
  }
  if (eigenvalues.size() != 0) {
    if (eigenvalues.size() != columns.cols()) {
      throw DimensionError("rotation basis: eigenvalue count differs from column count");
    }
    for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
      if (eigenvalues(j) < -1e-10 * std::max(1.0, eigenvalues(0))) {
        throw ValidationError("rotation basis: negative eigenvalue");
      }
      if (j > 0 && eigenvalues(j) > eigenvalues(j - 1)) {
        throw ValidationError("rotation basis: eigenvalues are not descending");
      }
    }
  }
}

RotationBasis RotationBasis::identity(Eigen::Index p) {
  RotationBasis b;
  b.columns = Matrix::Identity(p, p);
  b.kind = BasisKind::full;
  b.rho = 0.0;
  return b;
}

}  // namespace rsda
