#include "walklab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace walklab {

double chernoff(long long n, double p, double a, TailSide side) {
  if (n < 1 || p < 0.0 || p > 1.0) throw std::invalid_argument("chernoff: bad n or p");
  if (a <= 0.0) throw std::invalid_argument("chernoff: a must be positive");
  double np = static_cast<double>(n) * p;
  if (np <= 0.0) throw std::invalid_argument("chernoff: np must be positive");
  if (side == TailSide::below) return std::exp(-a * a / (2.0 * np));
  return std::exp(-a * a / (2.0 * (np + a / 3.0)));
}

TailBound chernoff_bounds(long long n, double p, double a) {
  return {chernoff(n, p, a, TailSide::below), chernoff(n, p, a, TailSide::above)};
}

std::uint64_t stirling_partition(int d, int i) {
  if (d < 0 || i < 0) throw std::invalid_argument("stirling_partition: negative input");
  if (d > 20) throw std::invalid_argument("stirling_partition: d > 20 overflows");
  if (i > d) return 0;
  if (d == 0) return 1;  // S(0,0); i > d handled above
  if (i == 0) return 0;

  // S(d,i) = (1/i!) sum_j (-1)^{i-j} C(i,j) j^d
  __int128 sum = 0;
  for (int j = 0; j <= i; ++j) {
    __int128 binom = 1;
    for (int t = 0; t < j; ++t) binom = binom * (i - t) / (t + 1);
    __int128 pw = 1;
    for (int t = 0; t < d; ++t) pw *= j;
    __int128 term = binom * pw;
    sum += ((i - j) % 2 == 0) ? term : -term;
  }
  __int128 fact = 1;
  for (int t = 2; t <= i; ++t) fact *= t;
  return static_cast<std::uint64_t>(sum / fact);
}

double binomial_moment(long long n, double p, int d) {
  if (n < 0 || p < 0.0 || p > 1.0) throw std::invalid_argument("binomial_moment: bad n or p");
  if (d < 0) throw std::invalid_argument("binomial_moment: negative order");
  if (d > 20) throw std::invalid_argument("binomial_moment: order > 20 unsupported");
  double total = 0.0;
  for (int i = 0; i <= d; ++i) {
    std::uint64_t s = stirling_partition(d, i);
    if (s == 0) continue;
    double falling = 1.0;
    for (int t = 0; t < i; ++t) falling *= static_cast<double>(n - t);
    total += static_cast<double>(s) * std::pow(p, i) * falling;
  }
  return total;
}

namespace {

// log(n!) - log of Stirling's approximation; small in magnitude, so the
// asymptotic series keeps the absolute error near machine precision where a
// direct lgamma difference would carry eps * |lgamma|
double stirling_error(double x) {
  if (x < 16.0) {
    return std::lgamma(x + 1.0) - (x + 0.5) * std::log(x) + x -
           0.5 * std::log(2.0 * M_PI);
  }
  const double s0 = 1.0 / 12.0, s1 = 1.0 / 360.0, s2 = 1.0 / 1260.0,
               s3 = 1.0 / 1680.0, s4 = 1.0 / 1188.0;
  const double xx = x * x;
  return (s0 - (s1 - (s2 - (s3 - s4 / xx) / xx) / xx) / xx) / x;
}

// binomial deviance x log(x/m) + m - x without cancellation near x = m
double deviance(double x, double m) {
  if (std::abs(x - m) < 0.1 * (x + m)) {
    const double v = (x - m) / (x + m);
    double s = (x - m) * v;
    double ej = 2.0 * x * v;
    const double v2 = v * v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v2;
      const double term = ej / (2.0 * j + 1.0);
      const double next = s + term;
      if (next == s) return s;
      s = next;
    }
    return s;
  }
  return x * std::log(x / m) + m - x;
}

}  // namespace

double binomial_log_pmf(long long n, long long k, double p) {
  if (n < 0 || k < 0 || k > n) return -INFINITY;
  if (p <= 0.0) return k == 0 ? 0.0 : -INFINITY;
  if (p >= 1.0) return k == n ? 0.0 : -INFINITY;
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  if (k == 0) return nd * std::log1p(-p);
  if (k == n) return nd * std::log(p);
  // saddle-point form: the large lgamma magnitudes never appear, so the
  // absolute error of the log stays near eps instead of eps * lgamma(n)
  const double lf = stirling_error(nd) - stirling_error(kd) -
                    stirling_error(nd - kd) - deviance(kd, nd * p) -
                    deviance(nd - kd, nd * (1.0 - p)) +
                    0.5 * std::log(nd / (2.0 * M_PI * kd * (nd - kd)));
  return lf;
}

std::pair<double, double> reciprocal_moment_bounds(long long n, double p, double a,
                                                   double b, double slack) {
  if (a <= 0.0) throw std::invalid_argument("reciprocal_moment_bounds: a must be positive");
  if (b < 1.0) throw std::invalid_argument("reciprocal_moment_bounds: b must be >= 1");
  double np = static_cast<double>(n) * p;
  if (np <= 0.0) throw std::invalid_argument("reciprocal_moment_bounds: np must be positive");
  double lower = std::pow(a + np, -b);
  double upper = lower + slack * std::pow(np, -(b + 1.0));
  return {lower, upper};
}

double reciprocal_moment_exact(long long n, double p, double a, double b) {
  if (a <= 0.0) throw std::invalid_argument("reciprocal_moment_exact: a must be positive");
  if (n < 0 || p < 0.0 || p > 1.0) throw std::invalid_argument("reciprocal_moment_exact: bad n or p");
  return binomial_expectation(n, p, [a, b](long long k) {
    return std::pow(a + static_cast<double>(k), -b);
  });
}

IndicatorReciprocal indicator_reciprocal_identity(long long n, double p, double alpha) {
  if (n < 1) throw std::invalid_argument("indicator_reciprocal_identity: n must be >= 1");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("indicator_reciprocal_identity: bad p");
  if (alpha < 1.0) throw std::invalid_argument("indicator_reciprocal_identity: alpha must be >= 1");
  IndicatorReciprocal out;
  out.lhs = binomial_expectation(n, p, [alpha](long long k) {
    return k >= 1 ? std::pow(static_cast<double>(k), -alpha) : 0.0;
  });
  double np = static_cast<double>(n) * p;
  out.rhs = np * binomial_expectation(n - 1, p, [alpha](long long k) {
              return std::pow(static_cast<double>(k) + 1.0, -(alpha + 1.0));
            });
  out.difference = out.lhs - out.rhs;
  return out;
}

namespace {

bool np_in_regime(long long n, double np) {
  if (n < 3) return false;
  double l1 = std::log(static_cast<double>(n));
  double l2 = std::log(l1);
  if (l2 <= 0.0) return false;
  double lower = l1 + std::log(l2);
  double upper = std::pow(static_cast<double>(n), 0.1);
  return np >= lower && np <= upper;
}

}  // namespace

ConcentrationInterval concentration_interval(const std::string& theorem,
                                             const IntervalParams& params) {
  ConcentrationInterval out;
  out.theorem = theorem;
  out.in_regime = np_in_regime(params.n, params.np);

  long long n = params.n;
  double np = params.np;
  double logn = n >= 2 ? std::log(static_cast<double>(n)) : 0.0;

  if (theorem == "exthm-relative") {
    if (params.ratio <= 0.0) throw std::invalid_argument("exthm-relative: ratio must be positive");
    out.center = params.center;
    out.half_width = params.ratio * std::abs(params.center);
    if (out.half_width == 0.0) out.half_width = params.ratio;
    return out;
  }

  if (n < 2) throw std::invalid_argument("concentration_interval: n must be >= 2");

  if (theorem == "resconc-i") {
    double gi = params.gamma1_i, gj = params.gamma1_j;
    if (gi <= 0.0 || gj <= 0.0) throw std::invalid_argument("resconc-i: gamma1 values required");
    if (np <= 1.0) throw std::invalid_argument("resconc-i: np must exceed 1");
    out.center = 1.0 / gi + 1.0 / gj;
    double quad = 1.0 / (gi * gi) + 1.0 / (gj * gj);
    double log_term = 9.0 * (gi + gj) * logn / (gi * gj * np * std::log(np));
    out.half_width = std::max(quad, log_term);
    return out;
  }
  if (theorem == "resconc-ii") {
    double gi = params.gamma1_i, gj = params.gamma1_j;
    if (gi <= 0.0 || gj <= 0.0) throw std::invalid_argument("resconc-ii: gamma1 values required");
    out.center = 1.0 / gi + 1.0 / gj;
    if (params.variant.empty() || params.variant == "displayed") {
      // np = c log n; width 10/(c^2 log n loglog n)
      double c = np / logn;
      double loglogn = std::log(logn);
      if (c <= 0.0 || loglogn <= 0.0)
        throw std::invalid_argument("resconc-ii: displayed variant needs n > e^e and np > 0");
      out.half_width = 10.0 / (c * c * logn * loglogn);
    } else if (params.variant == "proof") {
      if (np <= 1.0) throw std::invalid_argument("resconc-ii: np must exceed 1");
      out.half_width = 10.0 * logn / (np * np * std::log(np));
    } else {
      throw std::invalid_argument("resconc-ii: unknown variant " + params.variant);
    }
    return out;
  }
  if (theorem == "resconc-iii") {
    if (np <= 0.0) throw std::invalid_argument("resconc-iii: np must be positive");
    out.center = 2.0 / np;
    out.half_width = 7.0 * std::sqrt(logn) / std::pow(np, 1.5);
    return out;
  }
  if (theorem == "concentration-f") {
    if (np <= 1.0) throw std::invalid_argument("concentration-f: np must exceed 1");
    if (params.f <= 0.0) throw std::invalid_argument("concentration-f: f must be positive");
    out.center = params.center;
    out.half_width =
        std::abs(params.center) * std::sqrt(params.f * logn / (np * std::log(np)));
    return out;
  }
  throw std::invalid_argument("concentration_interval: unknown theorem " + theorem);
}

}  // namespace walklab
