#pragma once

#include <string>
#include <vector>

#include "qra/experiment.hpp"
#include "qra/stats.hpp"

namespace qra {

/// Final MSE of each (seed, trial, Nc) run: the last iteration for iterative protocols,
/// the largest M for two-phase.
struct FinalPoint {
  std::uint64_t seed;
  std::uint64_t trial;
  int nc;
  double loss;
};
std::vector<FinalPoint> final_points(const std::vector<ResultRecord>& records);

/// Per-seed log10 of the trial-averaged final MSE, keyed by Nc then seed.
struct SeedSeries {
  int nc;
  std::vector<std::uint64_t> seeds;
  std::vector<double> log10_mse;
};
std::vector<SeedSeries> log10_final_by_seed(const std::vector<ResultRecord>& records);

struct SignificanceRow {
  int nc;
  std::size_t n;
  double mean_log10_a;
  double mean_log10_b;
  TTestResult t;
  WilcoxonResult wilcoxon;
};

struct SignificanceReport {
  double alpha = 0.05;
  double alpha_adjusted = 0.05;  // alpha / number of Nc comparisons
  std::vector<SignificanceRow> rows;

  std::string to_text() const;
};

/// Paired comparison of two experiments on log10 final MSE, per Nc.
/// Throws DataError when the seed sets differ.
SignificanceReport significance_report(const std::vector<ResultRecord>& a, const std::vector<ResultRecord>& b,
                                       double alpha = 0.05);

/// Mean final MSE per Nc (and M for two-phase) as a plain-text table.
std::string summary_table(const std::vector<ResultRecord>& records);

}  // namespace qra
