#pragma once

// k-fold cross-validation plans and error estimates.

#include "rsda/dataset.hpp"
#include "rsda/rules.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace rsda {

struct Fold {
  std::vector<Eigen::Index> train;
  std::vector<Eigen::Index> validation;
};

struct FoldPlan {
  std::vector<Fold> folds;
  std::uint64_t seed = 0;
  int k = 0;
  bool stratified = false;
};

/// Partitions the rows into k validation sets.
///
/// Rows are first put in a canonical order (label, squared norm, then feature
/// values lexicographically) and then shuffled with the seed, so the plan
/// depends on row contents rather than row order. The norm key keeps the plan
/// unchanged under orthogonal transforms of the features. Stratified plans deal each class
/// round-robin, keeping class proportions within one sample per fold.
///
/// Throws DomainError for k < 2 or k > n, and DataError when stratification
/// is requested with a class smaller than k.
FoldPlan make_folds(const LabeledDataset& data, int k, std::uint64_t seed, bool stratified);

using Trainer = std::function<AnyRule(const LabeledDataset&)>;

/// Validation misclassification rate pooled over folds (i.e. weighted by fold
/// size). A trainer failure is rethrown as the same exception type family
/// with the fold index prepended.
double cv_error(const LabeledDataset& data, const FoldPlan& plan, const Trainer& trainer);

/// Misclassified validation counts per fold, in fold order.
std::vector<Eigen::Index> cv_mistakes(const LabeledDataset& data, const FoldPlan& plan,
                                      const Trainer& trainer);

/// Number of folds usable for a stratified plan: min(k, n1, n2). Returns a
/// value below 2 when cross-validation is impossible.
int usable_folds(const LabeledDataset& data, int k);

}  // namespace rsda
