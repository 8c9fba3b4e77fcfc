#pragma once

// Command-line front end: dataset files, run manifests and the five
// subcommands (simulate, train, predict, sweep, diagnose).

#include "rsda/dataset.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rsda::cli {

inline constexpr std::string_view tool_version = "0.1.0";

/// Bad flags or inputs the user must fix; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// CSV with a header row. A column named "label" holds 1 or 2; every other
/// column is a numeric feature, in header order.
struct DatasetFile {
  std::vector<std::string> feature_names;
  Matrix features;
  std::optional<std::vector<Label>> labels;

  /// Throws DataError when the file has no label column.
  LabeledDataset labeled(const std::filesystem::path& source) const;
};

/// Throws UsageError for a file with no data rows and DataError (naming the
/// file and line) for ragged rows, missing cells or non-numeric values.
DatasetFile read_dataset_csv(const std::filesystem::path& path);

/// label column first, then x1..xp (or the given names).
void write_dataset_csv(const std::filesystem::path& path, const LabeledDataset& data,
                       const std::vector<std::string>& names = {});

/// "a,b,c" or an inclusive range "start:step:stop".
std::vector<double> parse_grid(std::string_view text);

/// Runs one command line (without the program name). Returns the exit code:
/// 0 success, 1 runtime failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsda::cli
