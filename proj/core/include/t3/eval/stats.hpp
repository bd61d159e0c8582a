#pragma once

#include <vector>

namespace t3::eval {

// Regularized incomplete beta I_x(a, b), evaluated with a Lentz continued
// fraction (convergence tolerance 1e-12).
// https://en.wikipedia.org/wiki/Beta_function#Incomplete_beta_function
double regularized_incomplete_beta(double x, double a, double b);

// Two-sided tail probability P(|T| >= |t|) for Student's t with df degrees
// of freedom: I_{df/(t^2+df)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

struct TTestResult {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double s1 = 0.0;  // sample standard deviations (n-1 denominator)
  double s2 = 0.0;
  long n1 = 0;
  long n2 = 0;
  double df = 0.0;  // Welch-Satterthwaite degrees of freedom
  double t = 0.0;
  double p = 1.0;
  double alpha = 0.05;
  bool significant = false;
};

// Welch's unequal-variance t-test, two-sided:
//   t = (mean_a - mean_b) / sqrt(s1^2/n1 + s2^2/n2)
// Both samples need >= 2 elements. Two degenerate cases: both variances zero
// with equal means gives t = 0, p = 1; both zero with unequal means is an
// error (the statistic is undefined).
TTestResult welch_t(const std::vector<double>& a, const std::vector<double>& b,
                    double alpha = 0.05);

}  // namespace t3::eval
