#include "fidreg/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fidreg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int k = 0; k < 1000; ++k) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) = 1 - P(a, x), valid for x >= a + 1
// (modified Lentz).
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cf(double a, double b, double x) {
  double qab = a + b;
  double qap = a + 1.0;
  double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 1000; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

// Bisection on a monotone increasing CDF; [lo, hi] must bracket p.
template <typename Cdf>
double invert_cdf(Cdf cdf, double p, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

namespace {

// Horner evaluation, highest-order coefficient first.
template <std::size_t N>
double horner(const double (&coef)[N], double x) {
  double acc = coef[0];
  for (std::size_t i = 1; i < N; ++i) acc = acc * x + coef[i];
  return acc;
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p outside (0,1)");
  // AS 241, algorithm PPND16 (Wichura 1988).
  static const double a[] = {2.5090809287301226727e3, 3.3430575583588128105e4,
                             6.7265770927008700853e4, 4.5921953931549871457e4,
                             1.3731693765509461125e4, 1.9715909503065514427e3,
                             1.3314166789178437745e2, 3.3871328727963666080e0};
  static const double b[] = {5.2264952788528545610e3, 2.8729085735721942674e4,
                             3.9307895800092710610e4, 2.1213794301586595867e4,
                             5.3941960214247511077e3, 6.8718700749205790830e2,
                             4.2313330701600911252e1, 1.0};
  static const double c[] = {7.74545014278341407640e-4, 2.27238449892691845833e-2,
                             2.41780725177450611770e-1, 1.27045825245236838258e0,
                             3.64784832476320460504e0,  5.76949722146069140550e0,
                             4.63033784615654529590e0,  1.42343711074968357734e0};
  static const double dd[] = {1.05075007164441684324e-9, 5.47593808499534494600e-4,
                              1.51986665636164571966e-2, 1.48103976427480074590e-1,
                              6.89767334985100004550e-1, 1.67638483018380384940e0,
                              2.05319162663775882187e0,  1.0};
  static const double e[] = {2.01033439929228813265e-7, 2.71155556874348757815e-5,
                             1.24266094738807843860e-3, 2.65321895265761230930e-2,
                             2.96560571828504891230e-1, 1.78482653991729133580e0,
                             5.46378491116411436990e0,  6.65790464350110377720e0};
  static const double f[] = {2.04426310338993978564e-15, 1.42151175831644588870e-7,
                             1.84631831751005468180e-5,  7.86869131145613259100e-4,
                             1.48753612908506148525e-2,  1.36929880922735805310e-1,
                             5.99832206555887937690e-1,  1.0};

  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * horner(a, r) / horner(b, r);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = horner(c, r) / horner(dd, r);
  } else {
    r -= 5.0;
    val = horner(e, r) / horner(f, r);
  }
  return (q < 0.0) ? -val : val;
}

double gamma_p(double a, double x) {
  if (a <= 0.0) throw std::invalid_argument("gamma_p: a must be positive");
  if (x < 0.0) throw std::invalid_argument("gamma_p: x must be nonnegative");
  if (x == 0.0) return 0.0;
  return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double chi_squared_cdf(double x, double df) {
  if (df <= 0.0) throw std::invalid_argument("chi_squared_cdf: df must be positive");
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * df, 0.5 * x);
}

double chi_squared_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("chi_squared_quantile: p outside (0,1)");
  if (df <= 0.0) throw std::invalid_argument("chi_squared_quantile: df must be positive");
  // Expand the upper bracket until it covers p, then bisect.
  double hi = df + 10.0 * std::sqrt(2.0 * df) + 10.0;
  while (chi_squared_cdf(hi, df) < p) hi *= 2.0;
  return invert_cdf([df](double x) { return chi_squared_cdf(x, df); }, p, 0.0, hi);
}

double incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("incomplete_beta: a,b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double x, double df) {
  if (df <= 0.0) throw std::invalid_argument("student_t_cdf: df must be positive");
  if (x == 0.0) return 0.5;
  double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + x * x));
  return (x > 0.0) ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("student_t_quantile: p outside (0,1)");
  if (df <= 0.0) throw std::invalid_argument("student_t_quantile: df must be positive");
  if (p == 0.5) return 0.0;
  // Solve on the upper half and mirror.
  double pu = (p > 0.5) ? p : 1.0 - p;
  double hi = 2.0;
  while (student_t_cdf(hi, df) < pu) hi *= 2.0;
  double t = invert_cdf([df](double x) { return student_t_cdf(x, df); }, pu, 0.0, hi);
  return (p > 0.5) ? t : -t;
}

double log_binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) throw std::invalid_argument("log_binomial: need 0 <= k <= n");
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace fidreg
