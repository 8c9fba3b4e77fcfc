#include "generators.hpp"
#include "oracles.hpp"

#include "rsda/errors.hpp"
#include "rsda/models.hpp"
#include "rsda/normal.hpp"
#include "rsda/population.hpp"

#include <gtest/gtest.h>

#include <cmath>

using rsda::Matrix;
using rsda::SymMatrix;
using rsda::Vector;

namespace {

rsda::PopulationModel identity_model(Eigen::Index p, const Vector& delta) {
  return rsda::PopulationModel(delta, Vector::Zero(p), SymMatrix::identity(p));
}

// U^T beta with beta from the Gauss-Jordan inverse.
Vector rotated_beta(const rsda::PopulationModel& m, const rsda::RotationBasis& b) {
  const Vector beta = oracle::inverse(m.sigma().matrix()) * m.delta();
  return b.columns.transpose() * beta;
}

}  // namespace

TEST(PopulationModel, ValidatesInputs) {
  EXPECT_THROW(rsda::PopulationModel(Vector::Zero(2), Vector::Zero(3), SymMatrix::identity(2)),
               rsda::DimensionError);
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  EXPECT_THROW(rsda::PopulationModel(Vector::Zero(2), Vector::Zero(2), SymMatrix(neg)),
               rsda::ValidationError);
}

TEST(OracleQuantities, HandCases) {
  const auto q = rsda::oracle_quantities(identity_model(3, Vector::Unit(3, 0)));
  EXPECT_NEAR((q.beta - Vector::Unit(3, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR(q.gamma, 1.0, 1e-15);
  EXPECT_NEAR(q.bayes_error, oracle::normal_cdf(-0.5), 1e-12);
  EXPECT_NEAR(q.bayes_error, 0.3085, 1e-4);

  const auto zero = rsda::oracle_quantities(identity_model(3, Vector::Zero(3)));
  EXPECT_EQ(zero.gamma, 0.0);
  EXPECT_EQ(zero.bayes_error, 0.5);
}

TEST(OracleQuantities, RandomModelGammaIsTwelve) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (int id : {1, 2}) {
      const auto model = rsda::build_random_model(id, 30, 0.3, seed);
      const auto q = rsda::oracle_quantities(model);
      EXPECT_NEAR(q.gamma, 12.0, 1e-8);
      EXPECT_NEAR(q.bayes_error, oracle::normal_cdf(-std::sqrt(3.0)), 1e-8);
    }
  }
  EXPECT_NEAR(oracle::normal_cdf(-std::sqrt(3.0)), 0.0416, 1e-4);
}

TEST(OracleRotation, HandCases) {
  const auto basis = rsda::oracle_rotation(identity_model(4, Vector::Unit(4, 0)), 0.5);
  EXPECT_NEAR(basis.eigenvalues(0), 1.5, 1e-14);
  EXPECT_NEAR(std::abs(basis.columns(0, 0)), 1.0, 1e-14);

  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 1, 3, 2;
  const rsda::PopulationModel flat(Vector::Zero(3), Vector::Zero(3), SymMatrix(d));
  const auto b = rsda::oracle_rotation(flat, 0.5);
  EXPECT_NEAR(b.eigenvalues(0), 3.0, 1e-14);
  EXPECT_NEAR(std::abs(b.columns(1, 0)), 1.0, 1e-14);
}

TEST(OracleRotation, DiagonalizesToyTwoTotalCovariance) {
  const auto model = rsda::build_toy_model(2, 30, 0.1);
  const auto basis = rsda::oracle_rotation(model, 0.5);
  const Vector delta = model.delta();
  const Matrix total = model.sigma().matrix() + 0.5 * delta * delta.transpose();
  Matrix rotated = basis.columns.transpose() * total * basis.columns;
  rotated.diagonal().setZero();
  EXPECT_LE(rsda::max_abs(rotated), 1e-8);
}

TEST(SpikeReport, ConditionOneGivesSqrtKPlusOne) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = testgen::spiked_case(20, 3, seed);
    const auto r = rsda::spike_report(c.model, 0.5, 3);
    EXPECT_NEAR(r.epsilon, 0.0, 1e-10);
    EXPECT_NEAR(r.c_k, 2.0, 1e-6);
  }
}

TEST(SpikeReport, DeltaInsideTopSpaceHasNoTail) {
  const auto c = testgen::spiked_case(15, 3, 42, true);
  const auto r = rsda::spike_report(c.model, 0.5, 3);
  EXPECT_NEAR(r.delta2_norm, 0.0, 1e-10);
  EXPECT_NEAR(r.d_tilde, 0.0, 1e-10);
  EXPECT_TRUE(std::isinf(r.c_k));
  ASSERT_TRUE(r.big_k.has_value());
  EXPECT_LE(*r.big_k, 3);
}

TEST(SpikeReport, BoundsObservedRatioOnQuasiSpikedModels) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto model = testgen::quasi_spiked_model(20, 2, 0.01, 4.0, seed);
    const auto r = rsda::spike_report(model, 1.0, 2);
    if (std::isinf(r.c_k)) continue;
    const Vector e = rotated_beta(model, rsda::oracle_rotation(model, 1.0));
    EXPECT_LE(e.lpNorm<1>() / e.norm(), r.c_k * (1 + 1e-10));
    ++checked;
  }
  EXPECT_GE(checked, 30);
}

TEST(SpikeReport, RejectsBadArguments) {
  const auto c = testgen::spiked_case(6, 2, 1);
  EXPECT_THROW(rsda::spike_report(c.model, 0.5, 0), rsda::DomainError);
  EXPECT_THROW(rsda::spike_report(c.model, 0.5, 6), rsda::DomainError);
  EXPECT_THROW(rsda::spike_report(c.model, 0.0, 2), rsda::DomainError);
}

TEST(SparsityProfile, CountsAndEnergy) {
  Vector v(4);
  v << 3, 0, 4, 1e-12;
  const auto prof = rsda::sparsity_profile(v);
  EXPECT_EQ(prof.l0, 2);
  EXPECT_NEAR(prof.l1_l2_ratio, (7 + 1e-12) / 5.0, 1e-12);
  EXPECT_NEAR(prof.cumulative_energy(0), 16.0 / 25.0, 1e-15);
  EXPECT_NEAR(prof.cumulative_energy(1), 1.0, 1e-15);
  EXPECT_EQ(prof.cumulative_energy(3), 1.0);
}

TEST(RotatedBetaProfile, ToyModelsOneAndTwo) {
  const auto t1 = rsda::build_toy_model(1, 50, 0.1);
  EXPECT_EQ(rsda::rotated_beta_profile(t1, rsda::oracle_rotation(t1, 0.5)).l0, 1);
  const auto t2 = rsda::build_toy_model(2, 50, 0.1);
  const auto prof = rsda::rotated_beta_profile(t2, rsda::oracle_rotation(t2, 0.5));
  EXPECT_LE(prof.l0, 2);
  EXPECT_EQ(prof.cumulative_energy(49), 1.0);
}

TEST(RotatedBetaProfile, AtMostKPlusOneNonzerosOnSpikedModels) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto rng = rsda::make_rng(seed);
    const Eigen::Index p = testgen::uniform_int(rng, 5, 40);
    const Eigen::Index k = testgen::uniform_int(rng, 0, 4);
    const auto c = testgen::spiked_case(p, k, seed + 1000);
    for (double rho : {0.1, 0.5, 1.0, 10.0}) {
      const auto prof = rsda::rotated_beta_profile(c.model, rsda::oracle_rotation(c.model, rho));
      EXPECT_LE(prof.l0, k + 1) << "seed " << seed << " rho " << rho;
    }
  }
}

TEST(RotatedBetaProfile, DeltaInsideTopSpaceGivesAtMostK) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::Index k = 1 + static_cast<Eigen::Index>(seed % 4);
    const auto c = testgen::spiked_case(25, k, seed + 77, true);
    const auto prof = rsda::rotated_beta_profile(c.model, rsda::oracle_rotation(c.model, 0.5));
    EXPECT_LE(prof.l0, k);
    EXPECT_LE(prof.l1_l2_ratio, std::sqrt(static_cast<double>(k)) + 1e-10);
  }
}

TEST(RotatedBetaProfile, InvariantUnderOrthogonalTransformOfModel) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto rng = rsda::make_rng(seed + 3);
    const Eigen::Index p = 12;
    const SymMatrix sigma = testgen::random_spd(p, rng);
    const Vector mu1 = rsda::standard_normal_vector(p, rng);
    const rsda::PopulationModel model(mu1, Vector::Zero(p), sigma);
    const Matrix v = rsda::random_orthogonal(p, seed + 50);
    const rsda::PopulationModel moved(v * mu1, Vector::Zero(p),
                                      SymMatrix::symmetrized(v * sigma.matrix() * v.transpose()));
    const Vector a = rotated_beta(model, rsda::oracle_rotation(model, 0.5)).cwiseAbs();
    const Vector b = rotated_beta(moved, rsda::oracle_rotation(moved, 0.5)).cwiseAbs();
    EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-8);
    const auto pa = rsda::rotated_beta_profile(model, rsda::oracle_rotation(model, 0.5));
    const auto pb = rsda::rotated_beta_profile(moved, rsda::oracle_rotation(moved, 0.5));
    EXPECT_LE((pa.cumulative_energy - pb.cumulative_energy).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(EnergyCheck, BoundsHoldWhenRhoDominates) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto rng = rsda::make_rng(seed + 9);
    const Eigen::Index p = testgen::uniform_int(rng, 3, 30);
    const SymMatrix sigma = testgen::random_spd(p, rng);
    Vector delta = rsda::standard_normal_vector(p, rng);
    const double rho = 0.5;
    const double norm = oracle::spectral_norm(sigma.matrix());
    delta *= std::sqrt(testgen::uniform(rng, 3.0, 10.0) * norm / rho) / delta.norm();
    const rsda::PopulationModel model(delta, Vector::Zero(p), sigma);
    const auto r = rsda::theorem3_check(model, rho, 0);
    ASSERT_TRUE(r.applicable);
    EXPECT_GE(r.a_value, 3.0 - 1e-9);
    EXPECT_TRUE(r.bounds_ok);
    EXPECT_GE(r.energy_ratio, 0.5 - 1e-12);
    const double lambda1 = oracle::jacobi_eigenvalues(sigma.matrix())(0);
    EXPECT_GE(r.gamma1, delta.squaredNorm() / (4.0 * lambda1) * (1 - 1e-10));
    const double gamma = delta.dot(oracle::inverse(sigma.matrix()) * delta);
    EXPECT_LE(r.gamma1, gamma * (1 + 1e-10));
    EXPECT_NEAR(r.gamma, gamma, 1e-8 * gamma);
  }
}

TEST(EnergyCheck, VacuousWithoutSeparationAndGammaOneBelowGamma) {
  const auto c = testgen::spiked_case(10, 2, 3);
  const rsda::PopulationModel flat(Vector::Zero(10), Vector::Zero(10), c.model.sigma());
  const auto r = rsda::theorem3_check(flat, 0.5, 0);
  EXPECT_LE(r.a_value, 2.0);
  EXPECT_TRUE(r.bounds_ok);
  for (Eigen::Index k = 0; k < 10; ++k) {
    const auto q = rsda::theorem3_check(c.model, 0.5, k);
    EXPECT_LE(q.gamma1, q.gamma * (1 + 1e-10));
  }
}

TEST(ToyModels, CalibrationMatchesClosedForms) {
  const auto t1 = rsda::build_toy_model(1, 50, 0.01);
  const double a1 = 2.0 * oracle::normal_quantile(0.99) / std::sqrt(50.0);
  EXPECT_NEAR(a1, 0.65797, 1e-4);
  EXPECT_NEAR(t1.mu2()(0), a1, 1e-9);

  const Eigen::Index p = 50;
  const double c = 0.5;
  Matrix j = Matrix::Ones(p, p);
  const Matrix closed = (Matrix::Identity(p, p) - c / (1 + (p - 1) * c) * j) / (1 - c);
  Matrix cs = Matrix::Constant(p, p, c);
  cs.diagonal().setOnes();
  EXPECT_LE(rsda::max_abs(closed - oracle::inverse(cs)), 1e-10);
  Vector u = Vector::Zero(p);
  u.head(5).setOnes();
  const double quad = u.dot(closed * u);
  EXPECT_NEAR(quad, 9.01961, 1e-5);
  const double a2 = 2.0 * oracle::normal_quantile(0.95) / std::sqrt(quad);
  EXPECT_NEAR(a2, 1.0955, 5e-4);
  EXPECT_NEAR(rsda::build_toy_model(2, 50, 0.05).mu2()(0), a2, 1e-9);

  for (int id : {1, 2, 3}) {
    for (double t : {0.01, 0.05, 0.1}) {
      EXPECT_NEAR(rsda::oracle_quantities(rsda::build_toy_model(id, 50, t)).bayes_error, t, 1e-10);
    }
  }
  EXPECT_THROW(rsda::build_toy_model(3, 51, 0.1), rsda::DomainError);
  EXPECT_THROW(rsda::build_toy_model(1, 10, 0.6), rsda::DomainError);
}

TEST(StructuredModels, Shapes) {
  const auto m1 = rsda::build_structured_model(1, 20, 0.1, 0);
  EXPECT_LE(rsda::max_abs(m1.sigma().matrix() - rsda::build_toy_model(3, 20, 0.1).sigma().matrix()),
            0.0);
  const auto m2 = rsda::build_structured_model(2, 4, 0.1, 0);
  EXPECT_NEAR(m2.sigma()(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(m2.sigma()(0, 1), 0.7, 1e-15);
  EXPECT_NEAR(m2.sigma()(0, 2), 0.49, 1e-15);
  EXPECT_NEAR(m2.sigma()(0, 3), 0.343, 1e-15);
  const auto m3 = rsda::build_structured_model(3, 20, 0.1, 9);
  const Vector ev = oracle::jacobi_eigenvalues(m3.sigma().matrix());
  int ones = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) ones += std::abs(ev(i) - 1.0) < 1e-8;
  EXPECT_EQ(ones, 15);
  for (int id : {1, 2, 3}) {
    EXPECT_NEAR(rsda::oracle_quantities(rsda::build_structured_model(id, 20, 0.05, 4)).bayes_error,
                0.05, 1e-10);
  }
}

TEST(RandomModels, SparsityAndPositivity) {
  const auto dense = rsda::build_random_model(1, 20, 1.0, 3);
  const Vector beta = oracle::inverse(dense.sigma().matrix()) * dense.delta();
  for (Eigen::Index i = 0; i < beta.size(); ++i) EXPECT_GT(std::abs(beta(i)), 1e-12);
  const auto sparse = rsda::build_random_model(1, 20, 0.35, 3);
  const Vector sb = oracle::inverse(sparse.sigma().matrix()) * sparse.delta();
  int nz = 0;
  for (Eigen::Index i = 0; i < sb.size(); ++i) nz += std::abs(sb(i)) > 1e-8;
  EXPECT_EQ(nz, 7);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = rsda::build_random_model(1, 15, 0.5, seed);
    EXPECT_GT(rsda::sym_eigenvalues_desc(m.sigma())(14), 0.0);
  }
  const auto r2 = rsda::build_random_model(2, 10, 0.5, 1);
  EXPECT_NEAR(rsda::oracle_quantities(r2).gamma, 12.0, 1e-6);
}

TEST(ModelRecipe, NamesRoundTrip) {
  for (const char* name : {"toy1", "toy2", "toy3", "m1", "m2", "m3", "rand1", "rand2"}) {
    EXPECT_EQ(rsda::parse_model_name(name).name(), name);
  }
  EXPECT_THROW(rsda::parse_model_name("toy4"), rsda::DomainError);
  EXPECT_TRUE(rsda::parse_model_name("rand1").depends_on_seed());
  EXPECT_TRUE(rsda::parse_model_name("m3").depends_on_seed());
  EXPECT_FALSE(rsda::parse_model_name("toy2").depends_on_seed());
}
