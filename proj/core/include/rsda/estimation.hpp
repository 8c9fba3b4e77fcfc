#pragma once

// Sample moments and the empirical rotations built from them.

#include "rsda/dataset.hpp"
#include "rsda/linalg.hpp"
#include "rsda/rotation_basis.hpp"

#include <optional>

namespace rsda {

struct EstimatedMoments {
  Vector mu1;
  Vector mu2;
  Vector mu;     // (mu1 + mu2) / 2
  Vector delta;  // mu1 - mu2
  SymMatrix sigma;  // pooled MLE covariance
  Eigen::Index n1 = 0;
  Eigen::Index n2 = 0;
};

/// Class means and the pooled covariance (n1 S1 + n2 S2) / (n1 + n2), where
/// each class covariance divides by its own count. Throws DataError when a
/// class is empty.
EstimatedMoments estimate_moments(const LabeledDataset& data);

/// Sigma_hat + rho delta_hat delta_hat^T
SymMatrix total_covariance(const EstimatedMoments& m, double rho);

/// Covariance around the grand mean, ignoring labels (divisor n).
SymMatrix sample_total_covariance(const LabeledDataset& data);

/// Full eigenbasis of total_covariance(m, rho).
RotationBasis rotation_full(const EstimatedMoments& m, double rho);

/// (n+1) x p factor Y with Y^T Y = Sigma_hat + rho delta_hat delta_hat^T.
/// Rows 0..n-1 are (x_i - mu_hat_{class(i)}) / sqrt(n); the last row is
/// sqrt(rho) delta_hat^T.
Matrix gram_factor(const LabeledDataset& data, double rho);

struct EconomyRotation {
  RotationBasis basis;
  Eigen::Index numerical_rank = 0;
  bool clipped = false;  // the requested r exceeded the numerical rank
};

/// Leading eigenvectors of Y^T Y computed from the (n+1) x (n+1) Gram matrix
/// Y Y^T: U = Y^T V diag(1/sqrt(eta)). The numerical rank counts eigenvalues
/// above 1e-10 * max; r defaults to min(n, rank) and is clipped to the rank.
EconomyRotation rotation_economy(const LabeledDataset& data, double rho,
                                 std::optional<Eigen::Index> r = std::nullopt);

/// Features projected onto the basis columns; labels unchanged.
LabeledDataset rotate_dataset(const LabeledDataset& data, const RotationBasis& basis);

}  // namespace rsda
