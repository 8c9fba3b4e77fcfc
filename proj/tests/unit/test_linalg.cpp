#include "generators.hpp"
#include "oracles.hpp"

#include "rsda/errors.hpp"
#include "rsda/linalg.hpp"
#include "rsda/normal.hpp"
#include "rsda/spectral_checks.hpp"

#include <gtest/gtest.h>

#include <cmath>

using rsda::Matrix;
using rsda::SymMatrix;
using rsda::Vector;

TEST(SymMatrix, RejectsAsymmetricInput) {
  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  EXPECT_THROW(SymMatrix{m}, rsda::ValidationError);
  EXPECT_NO_THROW(SymMatrix::symmetrized(m));
}

TEST(SymEig, DiagonalInputIsSortedWithPermutedIdentityVectors) {
  Matrix m = Vector((Vector(3) << 1, 3, 2).finished()).asDiagonal();
  const auto eig = rsda::sym_eig_desc(SymMatrix(m));
  EXPECT_DOUBLE_EQ(eig.values(0), 3.0);
  EXPECT_DOUBLE_EQ(eig.values(1), 2.0);
  EXPECT_DOUBLE_EQ(eig.values(2), 1.0);
  EXPECT_NEAR(eig.vectors(1, 0), 1.0, 1e-14);
  EXPECT_NEAR(eig.vectors(2, 1), 1.0, 1e-14);
  EXPECT_NEAR(eig.vectors(0, 2), 1.0, 1e-14);
}

TEST(SymEig, RankOneUpdateOfIdentity) {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 0) += 0.5;
  const auto eig = rsda::sym_eig_desc(SymMatrix(m));
  EXPECT_NEAR(eig.values(0), 1.5, 1e-14);
  EXPECT_NEAR(eig.values(1), 1.0, 1e-14);
  EXPECT_NEAR(eig.values(2), 1.0, 1e-14);
  EXPECT_NEAR(eig.vectors(0, 0), 1.0, 1e-14);
}

TEST(SymEig, CompoundSymmetryClosedForm) {
  const Eigen::Index p = 50;
  Matrix m = Matrix::Constant(p, p, 0.5);
  m.diagonal().setOnes();
  const SymMatrix s(m);
  const auto eig = rsda::sym_eig_desc(s);
  EXPECT_NEAR(eig.values(0), 25.5, 1e-10);
  for (Eigen::Index i = 1; i < p; ++i) EXPECT_NEAR(eig.values(i), 0.5, 1e-10);
  for (Eigen::Index j = 0; j < p; ++j) {
    const Vector v = eig.vectors.col(j);
    EXPECT_LE((m * v - eig.values(j) * v).norm(), 1e-10);
  }
}

TEST(SymEig, ReconstructionAndJacobiOracleOnRandomMatrices) {
  auto rng = rsda::make_rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index p = testgen::uniform_int(rng, 1, 60);
    const SymMatrix s = testgen::random_symmetric(p, rng);
    const auto eig = rsda::sym_eig_desc(s);
    const Matrix rebuilt = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
    const double scale = std::max(1.0, oracle::spectral_norm(s.matrix()));
    EXPECT_LE(rsda::max_abs(rebuilt - s.matrix()), 1e-8 * scale);
    const Vector jacobi = oracle::jacobi_eigenvalues(s.matrix());
    EXPECT_LE((jacobi - eig.values).cwiseAbs().maxCoeff(), 1e-9 * scale);
    EXPECT_LE(rsda::max_abs(eig.vectors.transpose() * eig.vectors - Matrix::Identity(p, p)),
              1e-10);
  }
}

TEST(SymEig, SignConventionAndDeterminism) {
  auto rng = rsda::make_rng(5);
  const SymMatrix s = testgen::random_symmetric(12, rng);
  const auto a = rsda::sym_eig_desc(s);
  const auto b = rsda::sym_eig_desc(s);
  EXPECT_EQ(a.vectors, b.vectors);
  EXPECT_EQ(a.values, b.values);
  for (Eigen::Index j = 0; j < a.vectors.cols(); ++j) {
    Eigen::Index arg = 0;
    a.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    EXPECT_GE(a.vectors(arg, j), 0.0);
  }
}

TEST(PseudoInverse, HandCases) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  const auto pd = rsda::pseudo_inverse(SymMatrix(d));
  EXPECT_NEAR(pd(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(pd(1, 1), 0.0, 1e-15);
  EXPECT_LE(rsda::max_abs(rsda::pseudo_inverse(SymMatrix::identity(4)).matrix() -
                          Matrix::Identity(4, 4)),
            1e-15);
  Vector v(2);
  v << 1, 1;
  v /= std::sqrt(2.0);
  const Matrix s = v * v.transpose();
  const auto ps = rsda::pseudo_inverse(SymMatrix::symmetrized(s));
  EXPECT_LE(rsda::max_abs(ps.matrix() - s), 1e-14);
  EXPECT_LE(rsda::max_abs(s * ps.matrix() * s - s), 1e-14);
}

TEST(PseudoInverse, MoorePenroseIdentitiesOnRankDeficientInputs) {
  auto rng = rsda::make_rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index p = testgen::uniform_int(rng, 2, 30);
    const Eigen::Index r = testgen::uniform_int(rng, 1, static_cast<int>(p) - 1);
    const Matrix f = rsda::standard_normal_matrix(p, r, rng);
    const Matrix a = f * f.transpose();
    const Matrix x = rsda::pseudo_inverse(SymMatrix::symmetrized(a)).matrix();
    const double scale = std::max(1.0, oracle::spectral_norm(a)) *
                         std::max(1.0, oracle::spectral_norm(x));
    EXPECT_LE(rsda::max_abs(a * x * a - a), 1e-8 * scale * oracle::spectral_norm(a));
    EXPECT_LE(rsda::max_abs(x * a * x - x), 1e-8 * scale * oracle::spectral_norm(x));
    EXPECT_LE(rsda::max_abs((a * x).transpose() - a * x), 1e-8 * scale);
    EXPECT_LE(rsda::max_abs((x * a).transpose() - x * a), 1e-8 * scale);
  }
}

TEST(PseudoInverse, InvertibleMatchesGaussJordan) {
  auto rng = rsda::make_rng(3);
  const SymMatrix s = testgen::random_spd(8, rng);
  EXPECT_LE(rsda::max_abs(rsda::pseudo_inverse(s).matrix() - oracle::inverse(s.matrix())), 1e-9);
}

TEST(SpikedInverse, HandCases) {
  rsda::SpikeDecomposition one;
  one.dim = 2;
  one.base = 1.0;
  one.spikes.push_back({1.0, Vector::Unit(2, 0)});
  const auto inv = rsda::spiked_inverse(one);
  EXPECT_NEAR(inv(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(inv(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(inv(0, 1), 0.0, 1e-15);

  rsda::SpikeDecomposition none;
  none.dim = 3;
  none.base = 2.0;
  EXPECT_LE(rsda::max_abs(rsda::spiked_inverse(none).matrix() - 0.5 * Matrix::Identity(3, 3)),
            1e-15);
}

TEST(SpikedInverse, MatchesDenseInverseOracle) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto rng = rsda::make_rng(seed + 100);
    const Eigen::Index p = testgen::uniform_int(rng, 2, 40);
    const Eigen::Index k = testgen::uniform_int(rng, 0, std::min<int>(8, static_cast<int>(p)));
    const auto c = testgen::spiked_case(p, k, seed);
    const Matrix dense = oracle::inverse(c.spikes.reconstruct().matrix());
    EXPECT_LE(rsda::max_abs(rsda::spiked_inverse(c.spikes).matrix() - dense), 1e-8);
  }
}

TEST(SpikedInverse, ValidationRejectsBadDecompositions) {
  rsda::SpikeDecomposition d;
  d.dim = 2;
  d.base = 1.0;
  d.spikes.push_back({1.0, Vector::Unit(2, 0)});
  d.spikes.push_back({1.0, Vector::Unit(2, 0)});
  EXPECT_THROW(d.validate(), rsda::ValidationError);
  d.spikes.pop_back();
  d.base = 0.0;
  EXPECT_THROW(d.validate(), rsda::ValidationError);
}

TEST(OperatorNorm, HandCasesAndPowerIteration) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = -5;
  EXPECT_NEAR(rsda::operator_norm(d), 5.0, 1e-14);
  EXPECT_EQ(rsda::operator_norm(Matrix::Zero(3, 3)), 0.0);
  Matrix n(2, 2);
  n << 0, 1, 0, 0;
  EXPECT_NEAR(rsda::operator_norm(n), 1.0, 1e-14);
  auto rng = rsda::make_rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = rsda::standard_normal_matrix(7, 4, rng);
    EXPECT_NEAR(rsda::operator_norm(m), oracle::spectral_norm(m), 1e-8);
  }
}

TEST(Normal, CdfAndQuantileAgainstSeriesOracle) {
  EXPECT_DOUBLE_EQ(rsda::normal_cdf(0.0), 0.5);
  EXPECT_NEAR(rsda::normal_quantile(0.5), 0.0, 1e-12);
  EXPECT_NEAR(rsda::normal_quantile(0.95), 1.644854, 1e-6);
  EXPECT_NEAR(oracle::normal_quantile(0.95), 1.644854, 1e-6);
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    EXPECT_NEAR(rsda::normal_cdf(x), oracle::normal_cdf(x), 1e-12) << x;
  }
  for (double q : {0.001, 0.01, 0.1, 0.3, 0.7, 0.9, 0.99, 0.999}) {
    EXPECT_NEAR(rsda::normal_quantile(q), oracle::normal_quantile(q), 1e-10) << q;
    EXPECT_NEAR(rsda::normal_cdf(rsda::normal_quantile(q)), q, 1e-12);
  }
  EXPECT_THROW(rsda::normal_quantile(0.0), rsda::DomainError);
  EXPECT_THROW(rsda::normal_quantile(1.0), rsda::DomainError);
}

TEST(RandomOrthogonal, DeterministicAndOrthogonal) {
  const Matrix one = rsda::random_orthogonal(1, 4);
  EXPECT_NEAR(std::abs(one(0, 0)), 1.0, 1e-15);
  EXPECT_EQ(rsda::random_orthogonal(6, 99), rsda::random_orthogonal(6, 99));
  EXPECT_NE(rsda::random_orthogonal(6, 99), rsda::random_orthogonal(6, 100));
  const Matrix q = rsda::random_orthogonal(5, 21);
  EXPECT_NEAR(std::abs(oracle::determinant(q)), 1.0, 1e-8);
  EXPECT_LE(rsda::max_abs(q.transpose() * q - Matrix::Identity(5, 5)), 1e-12);
}

TEST(Weyl, HandCasesAndRandomTrials) {
  auto rng = rsda::make_rng(1);
  EXPECT_TRUE(rsda::check_weyl(testgen::random_symmetric(5, rng), Vector::Zero(5), 1.0));
  EXPECT_TRUE(rsda::check_weyl(SymMatrix::identity(4), Vector::Unit(4, 0), 1.0));
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index p = testgen::uniform_int(rng, 1, 25);
    const SymMatrix a = testgen::random_symmetric(p, rng);
    const Vector v = rsda::standard_normal_vector(p, rng);
    EXPECT_TRUE(rsda::check_weyl(a, v, testgen::uniform(rng, 0.01, 10.0)));
  }
}

TEST(DavisKahan, HandCasesAndPerturbedSpikes) {
  auto rng = rsda::make_rng(2);
  const SymMatrix a = testgen::random_symmetric(6, rng);
  const auto same = rsda::check_davis_kahan(a, a, 2);
  EXPECT_TRUE(same.ok);
  EXPECT_NEAR(same.lhs, 0.0, 1e-12);

  Matrix da = Matrix::Zero(2, 2), db = Matrix::Zero(2, 2);
  da.diagonal() << 10, 1;
  db.diagonal() << 10, 1.5;
  const auto diag = rsda::check_davis_kahan(SymMatrix(da), SymMatrix(db), 1);
  EXPECT_TRUE(diag.ok);
  EXPECT_NEAR(diag.lhs, 0.0, 1e-14);

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto local = rsda::make_rng(seed + 500);
    const Eigen::Index p = testgen::uniform_int(local, 4, 20);
    const Eigen::Index k = testgen::uniform_int(local, 1, 3);
    const auto c = testgen::spiked_case(p, k, seed + 500);
    const SymMatrix noise = testgen::random_symmetric(p, local);
    const SymMatrix b =
        SymMatrix::symmetrized(c.model.sigma().matrix() + 0.01 * noise.matrix());
    const auto check = rsda::check_davis_kahan(c.model.sigma(), b, k);
    EXPECT_TRUE(check.ok) << "seed " << seed << " lhs " << check.lhs << " rhs " << check.rhs;
    EXPECT_LE(check.lhs, 1.0 + 1e-12);
  }
}
