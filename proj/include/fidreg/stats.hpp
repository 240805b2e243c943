#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace fidreg {

/// log(sum_i exp(v[i])) computed against the running maximum so the result is
/// finite whenever any v[i] is.
template <typename Scalar>
Scalar log_sum_exp(std::span<const Scalar> v) {
  if (v.empty()) throw std::invalid_argument("log_sum_exp: empty input");
  Scalar m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  Scalar s = 0;
  for (Scalar x : v) s += std::exp(x - m);
  return m + std::log(s);
}

template <typename Scalar>
Scalar log_sum_exp(const std::vector<Scalar>& v) {
  return log_sum_exp(std::span<const Scalar>(v));
}

/// Percentile with linear interpolation between closest order statistics
/// (the "type 7" rule). Input must already be sorted ascending; q in [0, 1].
template <typename Scalar>
Scalar percentile_sorted(std::span<const Scalar> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("percentile_sorted: empty input");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("percentile_sorted: q outside [0,1]");
  const auto n = sorted.size();
  if (n == 1) return sorted[0];
  double h = q * static_cast<double>(n - 1);
  auto i = static_cast<std::size_t>(h);
  if (i >= n - 1) return sorted[n - 1];
  double w = h - static_cast<double>(i);
  return static_cast<Scalar>((1.0 - w) * sorted[i] + w * sorted[i + 1]);
}

template <typename Scalar>
Scalar percentile(std::vector<Scalar> values, double q) {
  std::sort(values.begin(), values.end());
  return percentile_sorted(std::span<const Scalar>(values), q);
}

// Distribution helpers. All take/return doubles; quantile functions invert
// the corresponding CDF to ~1e-12 relative accuracy.

/// Standard normal quantile (Wichura's AS 241 rational approximation).
double normal_quantile(double p);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

double chi_squared_cdf(double x, double df);
double chi_squared_quantile(double p, double df);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

double student_t_cdf(double x, double df);
double student_t_quantile(double p, double df);

/// log C(n, k) via log-gamma.
double log_binomial(long long n, long long k);

}  // namespace fidreg
