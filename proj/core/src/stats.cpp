#include "t3/eval/stats.hpp"

#include <cmath>
#include <limits>

#include "t3/error.hpp"

namespace t3::eval {

namespace {

constexpr double kCfTolerance = 1e-12;
constexpr int kCfMaxTerms = 200000;

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Modified Lentz evaluation of the textbook continued fraction for I_x(a,b):
// the loop accumulates K = 1 + d1/(1 + d2/(1 + ...)) and the expansion needs
// its reciprocal. https://en.wikipedia.org/wiki/Lentz%27s_algorithm
double incomplete_beta_cf(double x, double a, double b) {
  const double tiny = 1e-300;
  auto numer = [x, a, b](int n) {
    if (n % 2 == 0) {
      double m = n / 2;
      return m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
    }
    double m = (n - 1) / 2;
    return -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
  };
  double f = 1.0;
  double c = 1.0;
  double d = 0.0;
  for (int n = 1; n < kCfMaxTerms; ++n) {
    double an = numer(n);
    d = 1.0 + an * d;
    if (d == 0.0) d = tiny;
    c = 1.0 + an / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    double mult = c * d;
    f *= mult;
    if (std::fabs(mult - 1.0) <= kCfTolerance) break;
  }
  return 1.0 / f;
}

double sample_mean(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs, double mean) {
  double sum = 0.0;
  for (double x : xs) sum += (x - mean) * (x - mean);
  return sum / static_cast<double>(xs.size() - 1);
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0 && a > 0.0 && b > 0.0)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double front = std::exp(a * std::log(x) + b * std::log(1.0 - x) - log_beta(a, b));
  if (x <= (a + 1.0) / (a + b + 2.0)) {
    return front * incomplete_beta_cf(x, a, b) / a;
  }
  return 1.0 - regularized_incomplete_beta(1.0 - x, b, a);
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  if (t == 0.0) return 1.0;
  double x = df / (t * t + df);
  return regularized_incomplete_beta(x, df / 2.0, 0.5);
}

TTestResult welch_t(const std::vector<double>& a, const std::vector<double>& b,
                    double alpha) {
  if (a.size() < 2 || b.size() < 2) {
    throw PreconditionError("welch_t: both samples need at least 2 values");
  }
  TTestResult res;
  res.n1 = static_cast<long>(a.size());
  res.n2 = static_cast<long>(b.size());
  res.alpha = alpha;
  res.mean_a = sample_mean(a);
  res.mean_b = sample_mean(b);
  double var1 = sample_variance(a, res.mean_a);
  double var2 = sample_variance(b, res.mean_b);
  res.s1 = std::sqrt(var1);
  res.s2 = std::sqrt(var2);

  double v1 = var1 / static_cast<double>(res.n1);
  double v2 = var2 / static_cast<double>(res.n2);
  if (v1 + v2 == 0.0) {
    if (res.mean_a != res.mean_b) {
      throw PreconditionError("welch_t: zero variance in both samples with unequal means");
    }
    res.df = static_cast<double>(res.n1 + res.n2 - 2);
    res.t = 0.0;
    res.p = 1.0;
    res.significant = false;
    return res;
  }

  res.t = (res.mean_a - res.mean_b) / std::sqrt(v1 + v2);
  res.df = (v1 + v2) * (v1 + v2) /
           (v1 * v1 / static_cast<double>(res.n1 - 1) +
            v2 * v2 / static_cast<double>(res.n2 - 1));
  res.p = student_t_two_sided_p(res.t, res.df);
  res.significant = res.p < alpha;
  return res;
}

}  // namespace t3::eval
