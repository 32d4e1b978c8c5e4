#pragma once

#include <string>
#include <vector>

namespace qra {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

CheckResult check_kraus_completeness();
CheckResult check_cptp_trace_preservation(int applications = 1000);
CheckResult check_pure_mixed_agreement();
CheckResult check_shot_noise_variance(int draws = 100000);
CheckResult check_exact_wilcoxon();
CheckResult check_csv_determinism();

/// All of the above, in order.
std::vector<CheckResult> run_invariant_suites();

}  // namespace qra
