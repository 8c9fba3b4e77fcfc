#include "rsda/cli.hpp"

#include "rsda/errors.hpp"
#include "rsda/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rsda::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) {
      return cells;
    }
    start = comma + 1;
  }
}

[[noreturn]] void fail(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  std::ostringstream msg;
  msg << path.string() << ":" << line << ": " << what;
  throw DataError(msg.str());
}

}  // namespace

LabeledDataset DatasetFile::labeled(const std::filesystem::path& source) const {
  if (!labels) {
    throw DataError(source.string() + ": no 'label' column");
  }
  return LabeledDataset(features, *labels);
}

DatasetFile read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open data file " + path.string());
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      break;
    }
  }
  if (trim(line).empty()) {
    throw UsageError("data file " + path.string() + " is empty");
  }
  const auto header = split(line);
  DatasetFile file;
  std::optional<std::size_t> label_col;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") {
      if (label_col) {
        fail(path, line_no, "duplicate 'label' column");
      }
      label_col = c;
    } else {
      file.feature_names.emplace_back(header[c]);
    }
  }
  std::vector<std::vector<double>> rows;
  std::vector<Label> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      std::ostringstream what;
      what << "expected " << header.size() << " cells, found " << cells.size();
      fail(path, line_no, what.str());
    }
    std::vector<double> row;
    row.reserve(file.feature_names.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto cell = cells[c];
      if (cell.empty()) {
        fail(path, line_no, "missing value in column '" + std::string(header[c]) + "'");
      }
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        fail(path, line_no, "non-numeric value '" + std::string(cell) + "'");
      }
      if (label_col && c == *label_col) {
        if (value != 1.0 && value != 2.0) {
          fail(path, line_no, "label must be 1 or 2, got '" + std::string(cell) + "'");
        }
        labels.push_back(value == 1.0 ? Label::one : Label::two);
      } else {
        row.push_back(value);
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw UsageError("data file " + path.string() + " has no data rows");
  }
  file.features.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(file.feature_names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      file.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  if (label_col) {
    file.labels = std::move(labels);
  }
  return file;
}

void write_dataset_csv(const std::filesystem::path& path, const LabeledDataset& data,
                       const std::vector<std::string>& names) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << "label";
  for (Eigen::Index j = 0; j < data.dim(); ++j) {
    out << ',';
    if (names.size() == static_cast<std::size_t>(data.dim())) {
      out << names[static_cast<std::size_t>(j)];
    } else {
      out << 'x' << (j + 1);
    }
  }
  out << '\n';
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out << to_int(data.labels()[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      out << ',' << format_double(data.features()(i, j));
    }
    out << '\n';
  }
}

}  // namespace rsda::cli
