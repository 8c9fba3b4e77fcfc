#include "rsda/population.hpp"

#include "rsda/errors.hpp"
#include "rsda/normal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace rsda {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

PopulationModel::PopulationModel(Vector mu1, Vector mu2, SymMatrix sigma)
    : mu1_(std::move(mu1)), mu2_(std::move(mu2)), sigma_(std::move(sigma)) {
  if (mu1_.size() != mu2_.size() || mu1_.size() != sigma_.dim()) {
    std::ostringstream msg;
    msg << "population model: dimensions disagree (mu1 " << mu1_.size() << ", mu2 " << mu2_.size()
        << ", sigma " << sigma_.dim() << ")";
    throw DimensionError(msg.str());
  }
  if (!mu1_.allFinite() || !mu2_.allFinite()) {
    throw ValidationError("population model: means must be finite");
  }
  if (dim() > 0) {
    const double smallest = sym_eigenvalues_desc(sigma_)(dim() - 1);
    if (smallest < -1e-10) {
      std::ostringstream msg;
      msg << "population model: sigma is not positive semi-definite (min eigenvalue " << smallest
          << ")";
      throw ValidationError(msg.str());
    }
  }
}

OracleQuantities oracle_quantities(const PopulationModel& model) {
  OracleQuantities q;
  q.delta = model.delta();
  const Vector values = sym_eigenvalues_desc(model.sigma());
  const double largest = values.size() ? values(0) : 0.0;
  const double smallest = values.size() ? values(values.size() - 1) : 0.0;
  if (largest > 0.0 && smallest > 1e-12 * largest) {
    Eigen::LDLT<Matrix> ldlt(model.sigma().matrix());
    q.beta = ldlt.solve(q.delta);
  } else {
    q.used_pseudo_inverse = true;
    q.beta = pseudo_inverse(model.sigma()).matrix() * q.delta;
  }
  q.gamma = std::max(0.0, q.delta.dot(q.beta));
  q.bayes_error = normal_cdf(-0.5 * std::sqrt(q.gamma));
  return q;
}

RotationBasis oracle_rotation(const PopulationModel& model, double rho) {
  if (!(rho > 0.0)) {
    throw DomainError("oracle_rotation: rho must be positive");
  }
  const Vector delta = model.delta();
  const SymMatrix total =
      SymMatrix::symmetrized(model.sigma().matrix() + rho * delta * delta.transpose());
  EigenSystem eig = sym_eig_desc(total);
  RotationBasis basis;
  basis.columns = std::move(eig.vectors);
  basis.eigenvalues = std::move(eig.values);
  basis.rho = rho;
  basis.kind = BasisKind::full;
  return basis;
}

namespace {

struct SplitQuantities {
  double d;
  double epsilon;
  double d_tilde;
  double c_k;
  double delta1_norm;
  double delta2_norm;
};

SplitQuantities split_at(const EigenSystem& eig, const Vector& delta, double rho, Eigen::Index k) {
  const Eigen::Index p = eig.values.size();
  const double lambda_p = eig.values(p - 1);
  SplitQuantities s{};
  s.d = eig.values(k - 1) - eig.values(k);
  s.epsilon = eig.values(k) - lambda_p;
  const Vector coords = eig.vectors.transpose() * delta;
  s.delta1_norm = coords.head(k).norm();
  s.delta2_norm = coords.tail(p - k).norm();
  const double denom = s.d + rho * delta.squaredNorm();
  s.d_tilde = denom > 0.0 ? s.d * rho * s.delta2_norm * s.delta2_norm / denom : 0.0;
  const double margin = s.d_tilde - 2.0 * s.epsilon;
  if (margin > 0.0) {
    const double kk = static_cast<double>(k);
    const double rest = static_cast<double>(p - k - 1);
    s.c_k = std::sqrt(kk + 1.0) + std::sqrt(rest) * ((lambda_p + s.epsilon) / lambda_p) *
                                      (s.epsilon / lambda_p + std::sqrt(s.epsilon / margin));
  } else {
    s.c_k = kInf;
  }
  return s;
}

}  // namespace

SpikeStructureReport spike_report(const PopulationModel& model, double rho, Eigen::Index k) {
  const Eigen::Index p = model.dim();
  if (k < 1 || k >= p) {
    throw DomainError("spike_report: k must satisfy 1 <= k < p");
  }
  if (!(rho > 0.0)) {
    throw DomainError("spike_report: rho must be positive");
  }
  const EigenSystem eig = sym_eig_desc(model.sigma());
  if (!(eig.values(p - 1) > 0.0)) {
    throw DomainError("spike_report: the bound requires a positive smallest eigenvalue of sigma");
  }
  const Vector delta = model.delta();
  const SplitQuantities s = split_at(eig, delta, rho, k);

  SpikeStructureReport r;
  r.k = k;
  r.d = s.d;
  r.epsilon = s.epsilon;
  r.d_tilde = s.d_tilde;
  r.c_k = s.c_k;
  r.delta1_norm = s.delta1_norm;
  r.delta2_norm = s.delta2_norm;

  const double dnorm = delta.norm();
  if (dnorm > 0.0) {
    const Vector coords = eig.vectors.transpose() * delta;
    for (Eigen::Index kk = 1; kk <= p; ++kk) {
      if (coords.tail(p - kk).norm() <= 1e-10 * dnorm) {
        r.big_k = kk;
        break;
      }
    }
  }
  r.c_min = kInf;
  if (r.big_k) {
    for (Eigen::Index j = 1; j < *r.big_k && j < p; ++j) {
      r.c_min = std::min(r.c_min, split_at(eig, delta, rho, j).c_k);
    }
    r.ratio_bound = std::min(r.c_min, std::sqrt(static_cast<double>(*r.big_k)));
  } else {
    r.ratio_bound = kInf;
  }
  return r;
}

SparsityProfile sparsity_profile(const Vector& coefficients) {
  SparsityProfile prof;
  const Eigen::Index n = coefficients.size();
  const double l2 = coefficients.norm();
  prof.cumulative_energy = Vector::Ones(n);
  if (l2 == 0.0) {
    return prof;
  }
  const double threshold = 1e-8 * l2;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(coefficients(i)) > threshold) {
      ++prof.l0;
    }
  }
  prof.l1_l2_ratio = coefficients.lpNorm<1>() / l2;
  std::vector<double> sq(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    sq[static_cast<std::size_t>(i)] = coefficients(i) * coefficients(i);
  }
  std::sort(sq.begin(), sq.end(), std::greater<>());
  const double total = coefficients.squaredNorm();
  double running = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    running += sq[static_cast<std::size_t>(i)];
    prof.cumulative_energy(i) = std::min(1.0, running / total);
  }
  prof.cumulative_energy(n - 1) = 1.0;
  return prof;
}

SparsityProfile rotated_beta_profile(const PopulationModel& model, const RotationBasis& basis) {
  if (basis.dim() != model.dim()) {
    throw DimensionError("rotated_beta_profile: basis dimension differs from model dimension");
  }
  const OracleQuantities q = oracle_quantities(model);
  return sparsity_profile(basis.columns.transpose() * q.beta);
}

Theorem3Report theorem3_check(const PopulationModel& model, double rho, Eigen::Index k) {
  const Eigen::Index p = model.dim();
  if (k < 0 || k + 1 > p) {
    throw DomainError("theorem3_check: k must satisfy 0 <= k < p");
  }
  if (!(rho > 0.0)) {
    throw DomainError("theorem3_check: rho must be positive");
  }
  Theorem3Report r;
  const EigenSystem eig = sym_eig_desc(model.sigma());
  const double lambda_next = eig.values(k);
  const OracleQuantities q = oracle_quantities(model);
  r.gamma = q.gamma;
  if (!(lambda_next > 0.0)) {
    return r;
  }
  r.applicable = true;

  const Vector delta = model.delta();
  Matrix a = rho * delta * delta.transpose();
  for (Eigen::Index i = 0; i < k; ++i) {
    a.noalias() += eig.values(i) * eig.vectors.col(i) * eig.vectors.col(i).transpose();
  }
  r.a_value = sym_eigenvalues_desc(SymMatrix::symmetrized(a))(k) / lambda_next;

  const RotationBasis basis = oracle_rotation(model, rho);
  const Matrix u1 = basis.columns.leftCols(k + 1);
  const Vector projected = u1.transpose() * delta;
  const double dnorm = delta.norm();
  r.energy_ratio = dnorm > 0.0 ? projected.norm() / dnorm : 1.0;
  const Matrix reduced = u1.transpose() * model.sigma().matrix() * u1;
  const Vector solved = pseudo_inverse(SymMatrix::symmetrized(reduced)).matrix() * projected;
  r.gamma1 = std::max(0.0, projected.dot(solved));

  if (r.a_value > 2.0) {
    const double ratio = (r.a_value - 2.0) / (r.a_value - 1.0);
    r.energy_bound = ratio;
    r.gamma1_bound = ratio * ratio * delta.squaredNorm() / eig.values(0);
    const double slack = 1e-8;
    r.bounds_ok = r.energy_ratio >= ratio - slack &&
                  r.gamma1 >= r.gamma1_bound - slack * std::max(1.0, r.gamma1_bound);
  }
  return r;
}

}  // namespace rsda
