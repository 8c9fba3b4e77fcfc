#pragma once

#include "rsda/linalg.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rsda {

enum class Label : std::uint8_t { one = 1, two = 2 };

inline int to_int(Label l) { return static_cast<int>(l); }
/// Throws ValidationError for anything but 1 or 2.
Label label_from_int(long value);

/// Rows of `features` are observations; labels[i] belongs to row i.
class LabeledDataset {
 public:
  LabeledDataset() = default;
  /// Throws on size mismatch or non-finite entries.
  LabeledDataset(Matrix features, std::vector<Label> labels);

  const Matrix& features() const { return features_; }
  const std::vector<Label>& labels() const { return labels_; }
  Eigen::Index size() const { return features_.rows(); }
  Eigen::Index dim() const { return features_.cols(); }
  Eigen::Index count(Label label) const;
  Eigen::Index n1() const { return count(Label::one); }
  Eigen::Index n2() const { return count(Label::two); }

  LabeledDataset subset(std::span<const Eigen::Index> rows) const;

 private:
  Matrix features_;
  std::vector<Label> labels_;
};

}  // namespace rsda
