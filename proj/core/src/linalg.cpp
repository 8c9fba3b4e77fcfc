#include "rsda/linalg.hpp"

#include "rsda/errors.hpp"
#include "rsda/random.hpp"

#include <cmath>
#include <sstream>

namespace rsda {

SymMatrix::SymMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    std::ostringstream msg;
    msg << "symmetric matrix must be square, got " << entries_.rows() << "x" << entries_.cols();
    throw DimensionError(msg.str());
  }
  if (!entries_.allFinite()) {
    throw ValidationError("symmetric matrix has non-finite entries");
  }
  const double asym = max_abs(entries_ - entries_.transpose());
  if (asym > kSymmetryTolerance) {
    std::ostringstream msg;
    msg << "matrix is not symmetric (max |S - S^T| = " << asym << ")";
    throw ValidationError(msg.str());
  }
}

SymMatrix SymMatrix::symmetrized(const Matrix& entries) {
  if (entries.rows() != entries.cols()) {
    throw DimensionError("symmetrized: matrix must be square");
  }
  if (!entries.allFinite()) {
    throw ValidationError("symmetric matrix has non-finite entries");
  }
  Matrix sym = 0.5 * (entries + entries.transpose());
  return SymMatrix(std::move(sym), Trusted{});
}

SymMatrix SymMatrix::identity(Eigen::Index p) { return SymMatrix(Matrix::Identity(p, p), Trusted{}); }

SymMatrix SymMatrix::zero(Eigen::Index p) { return SymMatrix(Matrix::Zero(p, p), Trusted{}); }

void canonicalize_signs(Matrix& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double mag = std::abs(vectors(i, j));
      if (mag > best) {
        best = mag;
        arg = i;
      }
    }
    if (vectors.rows() > 0 && vectors(arg, j) < 0.0) {
      vectors.col(j) = -vectors.col(j);
    }
  }
}

EigenSystem sym_eig_desc(const SymMatrix& s) {
  const Eigen::Index p = s.dim();
  EigenSystem out;
  if (p == 0) {
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "symmetric eigensolver did not converge for a " << p << "x" << p << " matrix";
    throw ConvergenceError(msg.str());
  }
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  canonicalize_signs(out.vectors);
  return out;
}

Vector sym_eigenvalues_desc(const SymMatrix& s) {
  if (s.dim() == 0) {
    return Vector();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "symmetric eigensolver did not converge for a " << s.dim() << "x" << s.dim() << " matrix";
    throw ConvergenceError(msg.str());
  }
  return solver.eigenvalues().reverse();
}

SymMatrix pseudo_inverse(const SymMatrix& s, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw DomainError("pseudo_inverse: rel_tol must lie in (0, 1)");
  }
  const Eigen::Index p = s.dim();
  if (p == 0) {
    return s;
  }
  const EigenSystem eig = sym_eig_desc(s);
  const double largest = eig.values.cwiseAbs().maxCoeff();
  if (largest == 0.0) {
    return SymMatrix::zero(p);
  }
  const double cutoff = rel_tol * largest;
  Vector inv(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double v = eig.values(j);
    inv(j) = std::abs(v) < cutoff ? 0.0 : 1.0 / v;
  }
  return SymMatrix::symmetrized(eig.vectors * inv.asDiagonal() * eig.vectors.transpose());
}

void SpikeDecomposition::validate() const {
  if (!(base > 0.0) || !std::isfinite(base)) {
    throw ValidationError("spike decomposition: base must be positive");
  }
  for (std::size_t i = 0; i < spikes.size(); ++i) {
    const Spike& s = spikes[i];
    if (s.direction.size() != dim) {
      throw DimensionError("spike decomposition: direction length differs from dim");
    }
    if (!(s.weight > 0.0) || !std::isfinite(s.weight)) {
      throw ValidationError("spike decomposition: weights must be positive");
    }
    for (std::size_t j = 0; j <= i; ++j) {
      const double inner = s.direction.dot(spikes[j].direction);
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(inner - expected) > 1e-8) {
        std::ostringstream msg;
        msg << "spike decomposition: directions " << j << " and " << i << " are not orthonormal"
            << " (inner product " << inner << ")";
        throw ValidationError(msg.str());
      }
    }
  }
}

SymMatrix SpikeDecomposition::reconstruct() const {
  validate();
  Matrix m = base * Matrix::Identity(dim, dim);
  for (const Spike& s : spikes) {
    m.noalias() += s.weight * s.direction * s.direction.transpose();
  }
  return SymMatrix::symmetrized(m);
}

SymMatrix spiked_inverse(const SpikeDecomposition& d) {
  d.validate();
  const double a = d.base;
  Matrix m = Matrix::Identity(d.dim, d.dim) / a;
  for (const Spike& s : d.spikes) {
    m.noalias() -= (s.weight / (a * (a + s.weight))) * s.direction * s.direction.transpose();
  }
  return SymMatrix::symmetrized(m);
}

double operator_norm(const Matrix& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

Matrix random_orthogonal(Eigen::Index p, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  const Matrix g = standard_normal_matrix(p, p, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(p, p);
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < p; ++j) {
    if (r(j, j) < 0.0) {
      q.col(j) = -q.col(j);
    }
  }
  return q;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix projector(const Matrix& basis) { return basis * basis.transpose(); }

}  // namespace rsda
