#include "rsda/rules.hpp"

#include "rsda/errors.hpp"

#include <sstream>

namespace rsda {

namespace {

void check_dim(Eigen::Index expected, Eigen::Index actual) {
  if (expected != actual) {
    std::ostringstream msg;
    msg << "rule expects " << expected << " features but got " << actual;
    throw DimensionError(msg.str());
  }
}

}  // namespace

LinearRule::LinearRule(Vector omega, Vector nu) : omega_(std::move(omega)), nu_(std::move(nu)) {
  check_dim(omega_.size(), nu_.size());
  if (!omega_.allFinite() || !nu_.allFinite()) {
    throw ValidationError("linear rule has non-finite coefficients");
  }
  if (omega_.size() == 0 || omega_.cwiseAbs().maxCoeff() == 0.0) {
    throw DegenerateRuleError("degenerate rule: normal vector is zero");
  }
}

double LinearRule::score(const Vector& x) const {
  check_dim(dim(), x.size());
  return (x - nu_).dot(omega_);
}

RSRule::RSRule(RotationBasis b, LinearRule r) : basis(std::move(b)), inner(std::move(r)) {
  if (inner.dim() != basis.rank()) {
    std::ostringstream msg;
    msg << "rs rule: inner rule has " << inner.dim() << " coefficients but basis has "
        << basis.rank() << " columns";
    throw DimensionError(msg.str());
  }
}

Label predict(const LinearRule& rule, const Vector& x) {
  return rule.score(x) >= 0.0 ? Label::one : Label::two;
}

Label rs_predict(const RSRule& rule, const Vector& x) {
  check_dim(rule.dim(), x.size());
  return predict(rule.inner, rule.basis.columns.transpose() * x);
}

Label predict(const AnyRule& rule, const Vector& x) {
  return std::visit(
      [&](const auto& r) -> Label {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, LinearRule>) {
          return predict(r, x);
        } else {
          return rs_predict(r, x);
        }
      },
      rule);
}

Eigen::Index rule_dim(const AnyRule& rule) {
  return std::visit([](const auto& r) { return r.dim(); }, rule);
}

std::vector<Label> predict_rows(const AnyRule& rule, const Matrix& rows) {
  check_dim(rule_dim(rule), rows.cols());
  std::vector<Label> out;
  out.reserve(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    out.push_back(predict(rule, rows.row(i).transpose()));
  }
  return out;
}

double misclassification_rate(const AnyRule& rule, const LabeledDataset& data) {
  if (data.size() == 0) {
    return 0.0;
  }
  const std::vector<Label> predicted = predict_rows(rule, data.features());
  Eigen::Index wrong = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    wrong += predicted[i] != data.labels()[i];
  }
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

}  // namespace rsda
