#pragma once

#include <vector>

namespace qra {

/// Arithmetic mean of per-trial MSEs. Throws DataError on empty input.
double aggregate_seed(const std::vector<double>& mse_per_trial);

/// I_x(a, b) by continued fraction, to ~1e-14 relative.
double regularized_incomplete_beta(double a, double b, double x);
/// P(T <= t) for Student's t with df degrees of freedom.
double student_t_cdf(double t, double df);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  int df = 0;
  // All differences equal and nonzero: t is infinite, p reported as 0.
  bool degenerate = false;
};

/// Two-sided paired t-test on a - b.
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

struct WilcoxonResult {
  double statistic = 0.0;  // W+, sum of ranks of positive differences
  double p = 1.0;
  int n = 0;  // nonzero differences
  bool exact = true;
  bool all_zero = false;
};

inline constexpr int kWilcoxonExactMax = 20;

/// Two-sided signed-rank test on a - b. Zero differences are dropped, ties get midranks.
/// Exact null distribution for n <= 20, tie- and continuity-corrected normal approximation above.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace qra
