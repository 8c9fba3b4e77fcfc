#include "rsda/folds.hpp"

#include "rsda/errors.hpp"
#include "rsda/random.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>

namespace rsda {

namespace {

std::vector<Eigen::Index> canonical_order(const LabeledDataset& data) {
  const Matrix& x = data.features();
  const Vector norms = x.rowwise().squaredNorm();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(data.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& labels = data.labels();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const int la = to_int(labels[static_cast<std::size_t>(a)]);
    const int lb = to_int(labels[static_cast<std::size_t>(b)]);
    if (la != lb) {
      return la < lb;
    }
    if (norms(a) != norms(b)) {
      return norms(a) < norms(b);
    }
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (x(a, j) != x(b, j)) {
        return x(a, j) < x(b, j);
      }
    }
    return false;
  });
  return order;
}

void deal(const std::vector<Eigen::Index>& rows, int k, std::vector<Fold>& folds) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    folds[i % static_cast<std::size_t>(k)].validation.push_back(rows[i]);
  }
}

}  // namespace

FoldPlan make_folds(const LabeledDataset& data, int k, std::uint64_t seed, bool stratified) {
  const Eigen::Index n = data.size();
  if (k < 2 || k > n) {
    std::ostringstream msg;
    msg << "make_folds: need 2 <= k <= n (k=" << k << ", n=" << n << ")";
    throw DomainError(msg.str());
  }
  FoldPlan plan;
  plan.seed = seed;
  plan.k = k;
  plan.stratified = stratified;
  plan.folds.resize(static_cast<std::size_t>(k));

  const auto order = canonical_order(data);
  Rng rng = make_rng(seed);
  if (stratified) {
    if (data.n1() < k || data.n2() < k) {
      std::ostringstream msg;
      msg << "make_folds: stratified " << k << "-fold split needs " << k
          << " samples per class (n1=" << data.n1() << ", n2=" << data.n2() << ")";
      throw DataError(msg.str());
    }
    for (const Label label : {Label::one, Label::two}) {
      std::vector<Eigen::Index> rows;
      for (const Eigen::Index i : order) {
        if (data.labels()[static_cast<std::size_t>(i)] == label) {
          rows.push_back(i);
        }
      }
      std::shuffle(rows.begin(), rows.end(), rng);
      deal(rows, k, plan.folds);
    }
  } else {
    std::vector<Eigen::Index> rows = order;
    std::shuffle(rows.begin(), rows.end(), rng);
    deal(rows, k, plan.folds);
  }

  for (Fold& fold : plan.folds) {
    std::sort(fold.validation.begin(), fold.validation.end());
    std::vector<bool> held(static_cast<std::size_t>(n), false);
    for (const Eigen::Index i : fold.validation) {
      held[static_cast<std::size_t>(i)] = true;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!held[static_cast<std::size_t>(i)]) {
        fold.train.push_back(i);
      }
    }
  }
  return plan;
}

std::vector<Eigen::Index> cv_mistakes(const LabeledDataset& data, const FoldPlan& plan,
                                      const Trainer& trainer) {
  std::vector<Eigen::Index> mistakes;
  mistakes.reserve(plan.folds.size());
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const Fold& fold = plan.folds[f];
    const LabeledDataset validation = data.subset(fold.validation);
    const auto prefix = "fold " + std::to_string(f) + ": ";
    AnyRule rule = [&]() -> AnyRule {
      try {
        return trainer(data.subset(fold.train));
      } catch (const DegenerateRuleError& e) {
        throw DegenerateRuleError(prefix + e.what());
      } catch (const ConvergenceError& e) {
        throw ConvergenceError(prefix + e.what());
      } catch (const DataError& e) {
        throw DataError(prefix + e.what());
      } catch (const DomainError& e) {
        throw DomainError(prefix + e.what());
      } catch (const DimensionError& e) {
        throw DimensionError(prefix + e.what());
      } catch (const ValidationError& e) {
        throw ValidationError(prefix + e.what());
      } catch (const Error& e) {
        throw Error(prefix + e.what());
      }
    }();
    const auto predicted = predict_rows(rule, validation.features());
    Eigen::Index wrong = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      wrong += predicted[i] != validation.labels()[i] ? 1 : 0;
    }
    mistakes.push_back(wrong);
  }
  return mistakes;
}

double cv_error(const LabeledDataset& data, const FoldPlan& plan, const Trainer& trainer) {
  const auto mistakes = cv_mistakes(data, plan, trainer);
  Eigen::Index total = 0;
  Eigen::Index held = 0;
  for (std::size_t f = 0; f < mistakes.size(); ++f) {
    total += mistakes[f];
    held += static_cast<Eigen::Index>(plan.folds[f].validation.size());
  }
  return held ? static_cast<double>(total) / static_cast<double>(held) : 0.0;
}

int usable_folds(const LabeledDataset& data, int k) {
  return static_cast<int>(std::min<Eigen::Index>({static_cast<Eigen::Index>(k), data.n1(), data.n2()}));
}

}  // namespace rsda
