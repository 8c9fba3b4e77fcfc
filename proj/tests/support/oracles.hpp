#pragma once

// Independent reference computations used to check library results. None of
// them calls into the library's linear algebra.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Gauss-Jordan elimination with partial pivoting.
inline Matrix inverse(Matrix a) {
  const auto n = a.rows();
  Matrix inv = Matrix::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pivot = c;
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(pivot, c))) pivot = r;
    }
    if (a(pivot, c) == 0.0) throw std::runtime_error("singular");
    a.row(c).swap(a.row(pivot));
    inv.row(c).swap(inv.row(pivot));
    const double d = a(c, c);
    a.row(c) /= d;
    inv.row(c) /= d;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a(r, c);
      if (f == 0.0) continue;
      a.row(r) -= f * a.row(c);
      inv.row(r) -= f * inv.row(c);
    }
  }
  return inv;
}

// Determinant by LU with partial pivoting.
inline double determinant(Matrix a) {
  const auto n = a.rows();
  double det = 1.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pivot = c;
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(pivot, c))) pivot = r;
    }
    if (a(pivot, c) == 0.0) return 0.0;
    if (pivot != c) {
      a.row(c).swap(a.row(pivot));
      det = -det;
    }
    det *= a(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      a.row(r) -= (a(r, c) / a(c, c)) * a.row(c);
    }
  }
  return det;
}

// Cyclic Jacobi rotations; eigenvalues sorted descending.
inline Vector jacobi_eigenvalues(Matrix a, int max_sweeps = 100) {
  const auto n = a.rows();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> v(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(v.begin(), v.end(), std::greater<>());
  return Eigen::Map<Vector>(v.data(), n);
}

// Largest singular value by power iteration on M^T M.
inline double spectral_norm(const Matrix& m, int iterations = 2000) {
  Vector x = Vector::Ones(m.cols()) / std::sqrt(static_cast<double>(m.cols()));
  double value = 0.0;
  for (int i = 0; i < iterations; ++i) {
    Vector y = m.transpose() * (m * x);
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    x = y / norm;
    value = std::sqrt(norm);
  }
  return value;
}

// Standard normal CDF from the Maclaurin series of erf (|x| <= 6) with the
// asymptotic tail beyond.
inline double normal_cdf(double x) {
  const double z = x / std::sqrt(2.0);
  if (std::abs(z) > 6.0) return x > 0 ? 1.0 : 0.0;
  double term = z;
  double sum = z;
  for (int n = 1; n < 400; ++n) {
    term *= -z * z / n;
    const double add = term / (2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
  }
  const double erf = 2.0 / std::sqrt(M_PI) * sum;
  return 0.5 * (1.0 + erf);
}

inline double normal_quantile(double q) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Brute-force minimum of the penalized ROAD objective for p = 2. The stiff
// penalty makes a plain lattice useless along delta, so the lattice runs over
// the coordinate s orthogonal to delta and the convex one-dimensional problem
// in the coordinate t along delta is solved by ternary search. The s lattice
// is refined twice around its best point.
inline std::pair<Vector, double> road_lattice_minimum(const Matrix& sigma, const Vector& delta,
                                                      double lambda, double kappa,
                                                      double half_width, int points = 2001) {
  const Vector u = delta / delta.norm();
  Vector v(2);
  v << -u(1), u(0);
  auto objective = [&](const Vector& w) {
    const double c = w.dot(delta) - 1.0;
    return 0.5 * w.dot(sigma * w) + lambda * w.lpNorm<1>() + 0.5 * kappa * c * c;
  };
  const double t_width = half_width + 2.0 / delta.norm();
  auto best_along = [&](double s, Vector& arg) {
    double lo = -t_width, hi = t_width;
    for (int i = 0; i < 300; ++i) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (objective(m1 * u + s * v) < objective(m2 * u + s * v)) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    arg = 0.5 * (lo + hi) * u + s * v;
    return objective(arg);
  };
  double center = 0.0, width = half_width;
  double best = std::numeric_limits<double>::infinity();
  Vector best_arg = Vector::Zero(2);
  for (int level = 0; level < 3; ++level) {
    double next = center;
    for (int i = 0; i < points; ++i) {
      const double s = center - width + 2.0 * width * i / (points - 1);
      Vector arg;
      const double value = best_along(s, arg);
      if (value < best) {
        best = value;
        best_arg = arg;
        next = s;
      }
    }
    center = next;
    width *= 8.0 / (points - 1);
  }
  return {best_arg, best};
}

}  // namespace oracle
