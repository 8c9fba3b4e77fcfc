#include "rsda/normal.hpp"

#include "rsda/errors.hpp"

#include <cmath>

namespace rsda {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("normal_quantile: probability must lie strictly inside (0, 1)");
  }
  // normal_cdf(-39) underflows to 0 and normal_cdf(9) rounds to 1, so the
  // bracket holds every representable q.
  double lo = -39.0;
  double hi = 39.0;
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (normal_cdf(mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(normal_cdf(lo) - q) < std::abs(normal_cdf(hi) - q) ? lo : hi;
}

}  // namespace rsda
