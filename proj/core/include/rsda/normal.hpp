#pragma once

namespace rsda {

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse of normal_cdf by bisection; throws DomainError unless 0 < q < 1.
double normal_quantile(double q);

}  // namespace rsda
