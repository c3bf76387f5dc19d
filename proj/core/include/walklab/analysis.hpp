#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

namespace walklab {

struct TailBound {
  double below = 0.0;  // P(X <= np - a) bound
  double above = 0.0;  // P(X >= np + a) bound
};

enum class TailSide { below, above };

// binomial deviation bounds, exp(-a^2/2np) and exp(-a^2/(2(np + a/3)))
double chernoff(long long n, double p, double a, TailSide side);
TailBound chernoff_bounds(long long n, double p, double a);

// Stirling partition numbers, exact; small arguments only (d <= 20)
std::uint64_t stirling_partition(int d, int i);

// E[X^d] for X ~ Bin(n, p) via partition numbers and falling factorials
double binomial_moment(long long n, double p, int d);

// log of the Bin(n, p) mass at k
double binomial_log_pmf(long long n, long long k, double p);

// compensated full-support expectation of f(k) under Bin(n, p)
template <class F>
double binomial_expectation(long long n, double p, F&& f) {
  if (p <= 0.0) return f(0LL);
  if (p >= 1.0) return f(n);
  double sum = 0.0, carry = 0.0;
  for (long long k = 0; k <= n; ++k) {
    double term = f(k) * std::exp(binomial_log_pmf(n, k, p));
    double y = term - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// sandwich for E[1 / (a + X)^b]: lower 1/(a + np)^b, upper adds slack/np^{b+1}
std::pair<double, double> reciprocal_moment_bounds(long long n, double p, double a,
                                                   double b, double slack = 10.0);
// exact enumeration of the same expectation
double reciprocal_moment_exact(long long n, double p, double a, double b);

struct IndicatorReciprocal {
  double lhs = 0.0;        // E[1{X >= 1} / X^alpha], X ~ Bin(n, p)
  double rhs = 0.0;        // E[np / (Y+1)^{alpha+1}], Y ~ Bin(n-1, p)
  double difference = 0.0;
};
IndicatorReciprocal indicator_reciprocal_identity(long long n, double p, double alpha);

struct IntervalParams {
  long long n = 0;
  double np = 0.0;
  double f = 0.0;             // concentration-f budget
  double gamma1_i = 0.0;      // realized degrees where the interval needs them
  double gamma1_j = 0.0;
  double center = 0.0;        // externally supplied center (relative/empirical)
  double ratio = 1.0;         // constant in front of relative half-widths
  std::string variant;        // resconc-ii: "displayed" (default) or "proof"
};

struct ConcentrationInterval {
  std::string theorem;
  double center = 0.0;
  double half_width = 0.0;
  bool in_regime = false;  // np within [log n + logloglog n, n^{1/10}]

  bool contains(double x) const {
    return x >= center - half_width && x <= center + half_width;
  }
};

// theorem ids: exthm-relative, resconc-i, resconc-ii, resconc-iii, concentration-f
ConcentrationInterval concentration_interval(const std::string& theorem,
                                             const IntervalParams& params);

}  // namespace walklab
