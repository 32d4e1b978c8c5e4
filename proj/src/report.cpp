#include "qra/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "qra/errors.hpp"

namespace qra {

std::vector<FinalPoint> final_points(const std::vector<ResultRecord>& records) {
  // Last iteration at the largest M wins for each run.
  std::map<std::tuple<std::uint64_t, std::uint64_t, int>, std::pair<std::pair<int, int>, double>> best;
  for (const auto& r : records) {
    const auto key = std::make_tuple(r.seed, r.trial, r.nc);
    const std::pair<int, int> rank{r.m.value_or(0), r.iteration.value_or(0)};
    auto it = best.find(key);
    if (it == best.end() || rank >= it->second.first) best[key] = {rank, r.loss};
  }
  std::vector<FinalPoint> out;
  for (const auto& [key, value] : best) {
    out.push_back(FinalPoint{std::get<0>(key), std::get<1>(key), std::get<2>(key), value.second});
  }
  return out;
}

std::vector<SeedSeries> log10_final_by_seed(const std::vector<ResultRecord>& records) {
  std::map<int, std::map<std::uint64_t, std::vector<double>>> grouped;
  for (const auto& p : final_points(records)) grouped[p.nc][p.seed].push_back(p.loss);
  std::vector<SeedSeries> out;
  for (const auto& [nc, by_seed] : grouped) {
    SeedSeries s{nc, {}, {}};
    for (const auto& [seed, trials] : by_seed) {
      s.seeds.push_back(seed);
      s.log10_mse.push_back(std::log10(aggregate_seed(trials)));
    }
    out.push_back(std::move(s));
  }
  return out;
}

SignificanceReport significance_report(const std::vector<ResultRecord>& a, const std::vector<ResultRecord>& b,
                                       double alpha) {
  const auto sa = log10_final_by_seed(a);
  const auto sb = log10_final_by_seed(b);
  std::map<int, const SeedSeries*> index_b;
  for (const auto& s : sb) index_b[s.nc] = &s;

  SignificanceReport report;
  report.alpha = alpha;
  for (const auto& s : sa) {
    const auto it = index_b.find(s.nc);
    if (it == index_b.end()) continue;
    const SeedSeries& other = *it->second;
    if (s.seeds != other.seeds) {
      throw DataError("seed sets differ between experiments at Nc=" + std::to_string(s.nc));
    }
    SignificanceRow row;
    row.nc = s.nc;
    row.n = s.seeds.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < row.n; ++i) {
      ma += s.log10_mse[i];
      mb += other.log10_mse[i];
    }
    row.mean_log10_a = ma / static_cast<double>(row.n);
    row.mean_log10_b = mb / static_cast<double>(row.n);
    row.t = paired_t_test(s.log10_mse, other.log10_mse);
    row.wilcoxon = wilcoxon_signed_rank(s.log10_mse, other.log10_mse);
    report.rows.push_back(row);
  }
  if (report.rows.empty()) throw DataError("the two experiments share no Nc values");
  report.alpha_adjusted = alpha / static_cast<double>(report.rows.size());
  return report;
}

namespace {

const char* marker(double p, double alpha, double alpha_adj) {
  if (p < alpha_adj) return "**";
  if (p < alpha) return "*";
  return "n.s.";
}

}  // namespace

std::string SignificanceReport::to_text() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "# alpha = %.3g, Bonferroni alpha/m = %.3g (m = %zu)\n", alpha, alpha_adjusted,
                rows.size());
  out << line;
  out << "#  nc   n  mean_log10_a  mean_log10_b        t      p_t  sig_t  W+        p_w  sig_w\n";
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%5d %3zu %13.4f %13.4f %8.3f %8.3g %6s %6.1f %10.3g %6s\n", r.nc, r.n,
                  r.mean_log10_a, r.mean_log10_b, r.t.t, r.t.p, marker(r.t.p, alpha, alpha_adjusted),
                  r.wilcoxon.statistic, r.wilcoxon.p, marker(r.wilcoxon.p, alpha, alpha_adjusted));
    out << line;
  }
  out << "# * p < alpha, ** p < alpha/m\n";
  return out.str();
}

std::string summary_table(const std::vector<ResultRecord>& records) {
  // Final value per run, averaged over seeds and trials, per (Nc, M).
  std::map<std::tuple<std::uint64_t, std::uint64_t, int, int>, std::pair<int, double>> last;
  for (const auto& r : records) {
    const auto key = std::make_tuple(r.seed, r.trial, r.nc, r.m.value_or(0));
    const int it = r.iteration.value_or(0);
    auto found = last.find(key);
    if (found == last.end() || it >= found->second.first) last[key] = {it, r.loss};
  }
  std::map<std::pair<int, int>, std::vector<double>> cells;
  for (const auto& [key, value] : last) cells[{std::get<2>(key), std::get<3>(key)}].push_back(value.second);

  std::ostringstream out;
  out << "#   nc      m  runs      mean_mse   mean_log10\n";
  char line[128];
  for (const auto& [key, values] : cells) {
    double mean = 0.0, mean_log = 0.0;
    for (double v : values) {
      mean += v;
      mean_log += std::log10(v);
    }
    mean /= static_cast<double>(values.size());
    mean_log /= static_cast<double>(values.size());
    std::snprintf(line, sizeof line, "%6d %6s %5zu %13.4e %12.4f\n", key.first,
                  key.second ? std::to_string(key.second).c_str() : "-", values.size(), mean, mean_log);
    out << line;
  }
  return out.str();
}

}  // namespace qra
