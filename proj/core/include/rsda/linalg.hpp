#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace rsda {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Dense real symmetric matrix.
///
/// The checked constructor rejects non-finite entries and asymmetry above
/// 1e-12 (absolute). Computed products that are symmetric only up to
/// rounding go through `symmetrized`, which averages with the transpose.
class SymMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;

  SymMatrix() = default;
  explicit SymMatrix(Matrix entries);

  static SymMatrix symmetrized(const Matrix& entries);
  static SymMatrix identity(Eigen::Index p);
  static SymMatrix zero(Eigen::Index p);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

 private:
  struct Trusted {};
  SymMatrix(Matrix entries, Trusted) : entries_(std::move(entries)) {}

  Matrix entries_;
};

/// Eigenvalues in descending order; column j of `vectors` belongs to values[j].
struct EigenSystem {
  Vector values;
  Matrix vectors;
};

struct Spike {
  double weight;     // a_i > 0
  Vector direction;  // unit vector
};

/// S = base * I + sum_i weight_i * direction_i direction_i^T with orthonormal
/// spike directions.
struct SpikeDecomposition {
  double base = 1.0;
  std::vector<Spike> spikes;
  Eigen::Index dim = 0;

  /// Throws ValidationError unless base > 0, weights > 0 and directions are
  /// orthonormal within 1e-8.
  void validate() const;
  SymMatrix reconstruct() const;
};

/// Symmetric eigendecomposition, eigenvalues descending.
///
/// Sign convention: in every eigenvector the entry of largest magnitude is
/// non-negative (first such index on ties). Repeated eigenvalues get an
/// arbitrary orthonormal basis of their eigenspace.
EigenSystem sym_eig_desc(const SymMatrix& s);

/// Eigenvalues only, descending.
Vector sym_eigenvalues_desc(const SymMatrix& s);

/// Flips columns of `vectors` in place so each follows the sign convention of
/// `sym_eig_desc`.
void canonicalize_signs(Matrix& vectors);

/// Moore-Penrose pseudoinverse of a symmetric matrix. Eigenvalues whose
/// magnitude is below rel_tol times the largest magnitude are treated as zero.
SymMatrix pseudo_inverse(const SymMatrix& s, double rel_tol = 1e-10);

/// Closed-form inverse a^-1 I - sum a_i / (a (a + a_i)) xi_i xi_i^T.
SymMatrix spiked_inverse(const SpikeDecomposition& d);

/// Largest singular value (0 for an empty or zero matrix).
double operator_norm(const Matrix& m);

/// Haar-distributed orthogonal matrix; deterministic given the seed.
Matrix random_orthogonal(Eigen::Index p, std::uint64_t seed);

/// max_ij |m_ij|
double max_abs(const Matrix& m);

/// Orthogonal projector onto the span of the columns of `basis`, which must
/// be orthonormal.
Matrix projector(const Matrix& basis);

}  // namespace rsda
