#include "rsda/models.hpp"

#include "rsda/errors.hpp"
#include "rsda/normal.hpp"
#include "rsda/random.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace rsda {

namespace {

Matrix compound_symmetry(Eigen::Index p, double c) {
  Matrix m = Matrix::Constant(p, p, c);
  m.diagonal().setOnes();
  return m;
}

Matrix autoregressive(Eigen::Index p, double r) {
  Matrix m(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      m(i, j) = std::pow(r, static_cast<double>(std::abs(i - j)));
    }
  }
  return m;
}

Vector leading_ones(Eigen::Index p, Eigen::Index count) {
  Vector u = Vector::Zero(p);
  u.head(count).setOnes();
  return u;
}

void check_target(double target_error) {
  if (!(target_error > 0.0 && target_error < 0.5)) {
    throw DomainError("target error must lie in (0, 0.5)");
  }
}

PopulationModel calibrated(SymMatrix sigma, const Vector& pattern, double target_error) {
  const double a = calibrate_mean_scale(sigma, pattern, target_error);
  const Eigen::Index p = pattern.size();
  return PopulationModel(Vector::Zero(p), a * pattern, std::move(sigma));
}

}  // namespace

double calibrate_mean_scale(const SymMatrix& sigma, const Vector& pattern, double target_error) {
  check_target(target_error);
  if (pattern.size() != sigma.dim()) {
    throw DimensionError("calibrate_mean_scale: pattern length differs from sigma dimension");
  }
  Eigen::LDLT<Matrix> ldlt(sigma.matrix());
  if (ldlt.info() != Eigen::Success) {
    throw DomainError("calibrate_mean_scale: sigma is not invertible");
  }
  const double quad = pattern.dot(ldlt.solve(pattern));
  if (!(quad > 0.0)) {
    throw DomainError("calibrate_mean_scale: pattern has zero Mahalanobis length");
  }
  return 2.0 * normal_quantile(1.0 - target_error) / std::sqrt(quad);
}

PopulationModel build_toy_model(int id, Eigen::Index p, double target_error) {
  check_target(target_error);
  if (p < 1) {
    throw DomainError("build_toy_model: p must be positive");
  }
  switch (id) {
    case 1:
      return calibrated(SymMatrix::identity(p), Vector::Ones(p), target_error);
    case 2:
      if (p < 5) {
        throw DomainError("build_toy_model: toy model 2 needs p >= 5");
      }
      return calibrated(SymMatrix(compound_symmetry(p, 0.5)), leading_ones(p, 5), target_error);
    case 3:
      if (p % 2 != 0) {
        throw DomainError("build_toy_model: toy model 3 needs an even p");
      }
      return calibrated(SymMatrix(compound_symmetry(p, 0.5)), leading_ones(p, p / 2), target_error);
    default:
      throw DomainError("build_toy_model: id must be 1, 2 or 3");
  }
}

PopulationModel build_structured_model(int id, Eigen::Index p, double target_error,
                                       std::uint64_t seed) {
  check_target(target_error);
  if (p < 2 || p % 2 != 0) {
    throw DomainError("build_structured_model: p must be even and at least 2");
  }
  const Vector pattern = leading_ones(p, p / 2);
  switch (id) {
    case 1:
      return calibrated(SymMatrix(compound_symmetry(p, 0.5)), pattern, target_error);
    case 2:
      return calibrated(SymMatrix::symmetrized(autoregressive(p, 0.7)), pattern, target_error);
    case 3: {
      Rng rng = make_rng(seed);
      const Matrix a = standard_normal_matrix(p, 5, rng);
      Matrix sigma = Matrix::Identity(p, p);
      sigma.noalias() += a * a.transpose();
      return calibrated(SymMatrix::symmetrized(sigma), pattern, target_error);
    }
    default:
      throw DomainError("build_structured_model: id must be 1, 2 or 3");
  }
}

PopulationModel build_random_model(int id, Eigen::Index p, double sparsity, std::uint64_t seed) {
  if (id != 1 && id != 2) {
    throw DomainError("build_random_model: id must be 1 or 2");
  }
  if (p < 1) {
    throw DomainError("build_random_model: p must be positive");
  }
  if (!(sparsity > 0.0 && sparsity <= 1.0)) {
    throw DomainError("build_random_model: sparsity must lie in (0, 1]");
  }
  // Guard against 0.35 * 20 = 7.000000000000001 rounding up to 8.
  const auto nonzeros = static_cast<Eigen::Index>(
      std::min<double>(static_cast<double>(p), std::ceil(sparsity * static_cast<double>(p) - 1e-9)));
  if (nonzeros < 1) {
    throw DomainError("build_random_model: sparsity leaves no nonzero coefficient");
  }

  constexpr int kMaxRetries = 10;
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    Rng rng = make_rng(seed + static_cast<std::uint64_t>(attempt));
    const Matrix m = standard_normal_matrix(p, p, rng);
    const Matrix mn = m / operator_norm(m);
    Matrix sigma = mn.transpose() * mn;
    if (id == 1) {
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      for (Eigen::Index i = 0; i < p; ++i) {
        sigma(i, i) += uniform(rng);
      }
    } else {
      sigma *= 4.0;
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    for (Eigen::Index i = 0; i < nonzeros; ++i) {
      std::uniform_int_distribution<Eigen::Index> pick(i, p - 1);
      std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick(rng))]);
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector beta = Vector::Zero(p);
    for (Eigen::Index i = 0; i < nonzeros; ++i) {
      beta(order[static_cast<std::size_t>(i)]) = normal(rng);
    }

    const SymMatrix cov = SymMatrix::symmetrized(sigma);
    const double quad = beta.dot(cov.matrix() * beta);
    if (!(quad > 1e-300) || !std::isfinite(quad)) {
      continue;
    }
    beta *= std::sqrt(12.0 / quad);
    Vector mu2 = -(cov.matrix() * beta);
    return PopulationModel(Vector::Zero(p), std::move(mu2), cov);
  }
  std::ostringstream msg;
  msg << "build_random_model: beta^T Sigma beta vanished in " << kMaxRetries + 1 << " attempts";
  throw ConvergenceError(msg.str());
}

PopulationModel ModelRecipe::build(std::uint64_t seed) const {
  switch (family) {
    case ModelFamily::toy:
      return build_toy_model(id, p, target_error);
    case ModelFamily::structured:
      return build_structured_model(id, p, target_error, seed);
    case ModelFamily::random:
      return build_random_model(id, p, sparsity, seed);
  }
  throw DomainError("unknown model family");
}

bool ModelRecipe::depends_on_seed() const {
  return family == ModelFamily::random || (family == ModelFamily::structured && id == 3);
}

std::string ModelRecipe::name() const {
  switch (family) {
    case ModelFamily::toy:
      return "toy" + std::to_string(id);
    case ModelFamily::structured:
      return "m" + std::to_string(id);
    case ModelFamily::random:
      return "rand" + std::to_string(id);
  }
  return "unknown";
}

ModelRecipe parse_model_name(std::string_view name) {
  ModelRecipe r;
  auto tail_id = [&](std::size_t prefix) {
    const std::string_view rest = name.substr(prefix);
    if (rest.size() != 1 || rest[0] < '1' || rest[0] > '9') {
      throw DomainError("unknown model '" + std::string(name) + "'");
    }
    return rest[0] - '0';
  };
  if (name.starts_with("toy")) {
    r.family = ModelFamily::toy;
    r.id = tail_id(3);
    if (r.id > 3) {
      throw DomainError("unknown model '" + std::string(name) + "'");
    }
  } else if (name.starts_with("rand")) {
    r.family = ModelFamily::random;
    r.id = tail_id(4);
    if (r.id > 2) {
      throw DomainError("unknown model '" + std::string(name) + "'");
    }
  } else if (name.starts_with("m")) {
    r.family = ModelFamily::structured;
    r.id = tail_id(1);
    if (r.id > 3) {
      throw DomainError("unknown model '" + std::string(name) + "'");
    }
  } else {
    throw DomainError("unknown model '" + std::string(name) + "'");
  }
  return r;
}

}  // namespace rsda
