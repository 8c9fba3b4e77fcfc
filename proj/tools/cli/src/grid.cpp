#include "rsda/cli.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace rsda::cli {

namespace {

double number(std::string_view text, std::string_view whole) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw UsageError("bad number '" + std::string(text) + "' in grid '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  if (text.empty()) {
    throw UsageError("empty grid");
  }
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos || text.find(':', b + 1) != std::string_view::npos) {
      throw UsageError("range grid must be start:step:stop, got '" + std::string(text) + "'");
    }
    const double start = number(text.substr(0, a), text);
    const double step = number(text.substr(a + 1, b - a - 1), text);
    const double stop = number(text.substr(b + 1), text);
    if (!(step > 0.0) || stop < start) {
      throw UsageError("range grid needs step > 0 and stop >= start: '" + std::string(text) + "'");
    }
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 100000) {
      throw UsageError("range grid too long: '" + std::string(text) + "'");
    }
    for (long i = 0; i < count; ++i) {
      double v = start + static_cast<double>(i) * step;
      if (std::abs(v - stop) <= 1e-9 * step) {
        v = stop;
      }
      out.push_back(v);
    }
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
    out.push_back(number(item, text));
    if (comma == std::string_view::npos) {
      return out;
    }
    start = comma + 1;
  }
}

}  // namespace rsda::cli
