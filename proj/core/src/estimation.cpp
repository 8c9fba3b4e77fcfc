#include "rsda/estimation.hpp"

#include "rsda/errors.hpp"

#include <cmath>
#include <sstream>

namespace rsda {

namespace {

void check_rho(double rho, const char* where) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError(std::string(where) + ": rho must be positive");
  }
}

// Rows centred on their own class mean.
Matrix class_centred(const LabeledDataset& data, const Vector& mu1, const Vector& mu2) {
  Matrix centred = data.features();
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    const bool first = data.labels()[static_cast<std::size_t>(i)] == Label::one;
    centred.row(i) -= (first ? mu1 : mu2).transpose();
  }
  return centred;
}

}  // namespace

EstimatedMoments estimate_moments(const LabeledDataset& data) {
  EstimatedMoments m;
  m.n1 = data.n1();
  m.n2 = data.n2();
  if (m.n1 < 1 || m.n2 < 1) {
    std::ostringstream msg;
    msg << "estimate_moments: both classes need at least one sample (n1=" << m.n1
        << ", n2=" << m.n2 << ")";
    throw DataError(msg.str());
  }
  const Eigen::Index p = data.dim();
  m.mu1 = Vector::Zero(p);
  m.mu2 = Vector::Zero(p);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    if (data.labels()[static_cast<std::size_t>(i)] == Label::one) {
      m.mu1 += data.features().row(i).transpose();
    } else {
      m.mu2 += data.features().row(i).transpose();
    }
  }
  m.mu1 /= static_cast<double>(m.n1);
  m.mu2 /= static_cast<double>(m.n2);
  m.mu = 0.5 * (m.mu1 + m.mu2);
  m.delta = m.mu1 - m.mu2;
  const Matrix centred = class_centred(data, m.mu1, m.mu2);
  Matrix sigma = Matrix::Zero(p, p);
  sigma.selfadjointView<Eigen::Lower>().rankUpdate(centred.transpose());
  sigma.triangularView<Eigen::StrictlyUpper>() = sigma.transpose();
  sigma /= static_cast<double>(data.size());
  m.sigma = SymMatrix::symmetrized(sigma);
  return m;
}

SymMatrix total_covariance(const EstimatedMoments& m, double rho) {
  check_rho(rho, "total_covariance");
  return SymMatrix::symmetrized(m.sigma.matrix() + rho * m.delta * m.delta.transpose());
}

SymMatrix sample_total_covariance(const LabeledDataset& data) {
  if (data.size() < 2) {
    throw DataError("sample_total_covariance: needs at least two samples");
  }
  const Vector mean = data.features().colwise().mean().transpose();
  const Matrix centred = data.features().rowwise() - mean.transpose();
  return SymMatrix::symmetrized(centred.transpose() * centred / static_cast<double>(data.size()));
}

RotationBasis rotation_full(const EstimatedMoments& m, double rho) {
  EigenSystem eig = sym_eig_desc(total_covariance(m, rho));
  RotationBasis basis;
  basis.columns = std::move(eig.vectors);
  basis.eigenvalues = std::move(eig.values);
  basis.rho = rho;
  basis.kind = BasisKind::full;
  return basis;
}

Matrix gram_factor(const LabeledDataset& data, double rho) {
  check_rho(rho, "gram_factor");
  const EstimatedMoments m = estimate_moments(data);
  const Eigen::Index n = data.size();
  Matrix y(n + 1, data.dim());
  y.topRows(n) = class_centred(data, m.mu1, m.mu2) / std::sqrt(static_cast<double>(n));
  y.row(n) = std::sqrt(rho) * m.delta.transpose();
  return y;
}

EconomyRotation rotation_economy(const LabeledDataset& data, double rho,
                                 std::optional<Eigen::Index> r) {
  const Matrix y = gram_factor(data, rho);
  const EigenSystem eig = sym_eig_desc(SymMatrix::symmetrized(y * y.transpose()));
  const double largest = eig.values(0);
  if (!(largest > 0.0)) {
    throw DataError("rotation_economy: total covariance is identically zero");
  }
  EconomyRotation out;
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    if (eig.values(j) > 1e-10 * largest) {
      ++out.numerical_rank;
    }
  }
  Eigen::Index keep = std::min(data.size(), out.numerical_rank);
  if (r) {
    if (*r < 1) {
      throw DomainError("rotation_economy: r must be at least 1");
    }
    keep = *r;
    if (keep > out.numerical_rank) {
      keep = out.numerical_rank;
      out.clipped = true;
    }
  }
  const Vector eta = eig.values.head(keep);
  Matrix columns = y.transpose() * eig.vectors.leftCols(keep);
  for (Eigen::Index j = 0; j < keep; ++j) {
    columns.col(j) /= std::sqrt(eta(j));
  }
  canonicalize_signs(columns);
  out.basis.columns = std::move(columns);
  out.basis.eigenvalues = eta;
  out.basis.rho = rho;
  out.basis.kind = BasisKind::economy;
  return out;
}

LabeledDataset rotate_dataset(const LabeledDataset& data, const RotationBasis& basis) {
  if (basis.dim() != data.dim()) {
    std::ostringstream msg;
    msg << "rotate_dataset: basis has dimension " << basis.dim() << " but data has " << data.dim();
    throw DimensionError(msg.str());
  }
  return LabeledDataset(data.features() * basis.columns, data.labels());
}

}  // namespace rsda
