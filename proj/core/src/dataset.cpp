#include "rsda/dataset.hpp"

#include "rsda/errors.hpp"

#include <algorithm>
#include <sstream>

namespace rsda {

Label label_from_int(long value) {
  if (value == 1) {
    return Label::one;
  }
  if (value == 2) {
    return Label::two;
  }
  std::ostringstream msg;
  msg << "labels must be 1 or 2, got " << value;
  throw ValidationError(msg.str());
}

LabeledDataset::LabeledDataset(Matrix features, std::vector<Label> labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (static_cast<Eigen::Index>(labels_.size()) != features_.rows()) {
    std::ostringstream msg;
    msg << "dataset has " << features_.rows() << " rows but " << labels_.size() << " labels";
    throw DimensionError(msg.str());
  }
  if (!features_.allFinite()) {
    throw ValidationError("dataset contains non-finite feature values");
  }
}

Eigen::Index LabeledDataset::count(Label label) const {
  return static_cast<Eigen::Index>(std::count(labels_.begin(), labels_.end(), label));
}

LabeledDataset LabeledDataset::subset(std::span<const Eigen::Index> rows) const {
  Matrix f(static_cast<Eigen::Index>(rows.size()), dim());
  std::vector<Label> l;
  l.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    f.row(static_cast<Eigen::Index>(i)) = features_.row(rows[i]);
    l.push_back(labels_[static_cast<std::size_t>(rows[i])]);
  }
  return LabeledDataset(std::move(f), std::move(l));
}

}  // namespace rsda
