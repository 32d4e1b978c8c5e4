#include "qra/validate.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "qra/csv.hpp"
#include "qra/experiment.hpp"
#include "qra/quantum_state.hpp"
#include "qra/random.hpp"
#include "qra/reservoir.hpp"
#include "qra/stats.hpp"

namespace qra {
namespace {

std::string fmt(const char* format, double value) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

MixedState random_mixed_state(int nq, Rng& rng) {
  MixedState s(nq);
  const auto dim = static_cast<Eigen::Index>(s.dimension());
  Eigen::MatrixXcd a(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) a(r, c) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  }
  Eigen::MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace();
  s.rho() = rho;
  s.symmetrize();
  return s;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CheckResult check_kraus_completeness() {
  CheckResult r{"kraus completeness", true, ""};
  Rng rng(11);
  double worst = 0.0;
  std::vector<double> ps = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int i = 0; i < 200; ++i) ps.push_back(rng.uniform01());
  for (double p : ps) {
    const auto k = reset_kraus(p);
    Mat2 sum = Mat2::Zero();
    for (const auto& m : k) sum += m.adjoint() * m;
    worst = std::max(worst, (sum - Mat2::Identity()).cwiseAbs().maxCoeff());
  }
  r.passed = worst <= 1e-15;
  r.detail = "max |sum K^dag K - I| = " + fmt("%.3g", worst) + " over " + std::to_string(ps.size()) + " p values";
  return r;
}

CheckResult check_cptp_trace_preservation(int applications) {
  CheckResult r{"CPTP trace preservation", true, ""};
  Rng rng(12);
  double worst_trace = 0.0;
  double worst_herm = 0.0;
  for (int i = 0; i < applications; ++i) {
    const int nq = 1 + i % 3;
    MixedState s = random_mixed_state(nq, rng);
    const int q = static_cast<int>(rng.uniform01() * nq);
    apply_reset_channel(s, q, rng.uniform01());
    worst_trace = std::max(worst_trace, std::abs(s.trace() - Complex(1.0, 0.0)));
    worst_herm = std::max(worst_herm, s.hermiticity_error());
  }
  r.passed = worst_trace <= 1e-12 && worst_herm <= 1e-12;
  r.detail = "max |tr rho - 1| = " + fmt("%.3g", worst_trace) + ", max hermiticity error = " +
             fmt("%.3g", worst_herm) + " over " + std::to_string(applications) + " applications";
  return r;
}

CheckResult check_pure_mixed_agreement() {
  CheckResult r{"pure/mixed agreement at p=0", true, ""};
  Rng rng(13);
  double worst = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const int nq = 1 + trial % 3;
    PureState pure = init_plus_pure(nq);
    MixedState mixed = init_plus_mixed(nq);
    for (int g = 0; g < 30; ++g) {
      const double kind = rng.uniform01();
      const double angle = rng.uniform(-4.0, 4.0);
      if (kind < 0.25 && nq >= 2) {
        const int i = static_cast<int>(rng.uniform01() * nq);
        const int j = (i + 1 + static_cast<int>(rng.uniform01() * (nq - 1))) % nq;
        apply_rzz(pure, i, j, GateAngle(angle));
        apply_rzz(mixed, i, j, GateAngle(angle));
      } else {
        const int q = static_cast<int>(rng.uniform01() * nq);
        const Axis axis = kind < 0.5 ? Axis::X : (kind < 0.75 ? Axis::Y : Axis::Z);
        apply_single_qubit_rotation(pure, q, axis, GateAngle(angle));
        apply_single_qubit_rotation(mixed, q, axis, GateAngle(angle));
        apply_reset_channel(mixed, q, 0.0);
      }
    }
    const ReservoirConfig config = ReservoirConfig::make(nq, Representation::mixed);
    const NoiseProfile zero = NoiseProfile::zeros(nq);
    for (int t = 0; t < 5; ++t) {
      const double u = rng.uniform(-1.0, 1.0);
      reservoir_step(pure, u, zero, config);
      reservoir_step(mixed, u, zero, config);
    }
    const Eigen::MatrixXcd outer = pure.amplitudes() * pure.amplitudes().adjoint();
    worst = std::max(worst, (outer - mixed.rho()).cwiseAbs().maxCoeff());
  }
  r.passed = worst <= 1e-12;
  r.detail = "max |psi psi^dag - rho| = " + fmt("%.3g", worst) + " over 60 random circuits, Nq <= 3";
  return r;
}

CheckResult check_shot_noise_variance(int draws) {
  CheckResult r{"shot-noise variance law", true, ""};
  constexpr int kShots = 1000;
  Rng rng(14);
  double worst = 0.0;
  for (double o : {0.0, 0.5, -0.5, 0.9, -0.9}) {
    FeatureMatrix v(1, 2);
    v << o, 1.0;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double x = apply_shot_noise(v, kShots, rng)(0, 0);
      sum += x;
      sum2 += x * x;
    }
    const double mean = sum / draws;
    const double var = (sum2 - draws * mean * mean) / (draws - 1);
    const double expected = (1.0 - o * o) / kShots;
    worst = std::max(worst, std::abs(var / expected - 1.0));
  }
  r.passed = worst <= 0.10;
  r.detail = "max relative variance deviation = " + fmt("%.4f", worst) + " (" + std::to_string(draws) + " draws per value)";
  return r;
}

CheckResult check_exact_wilcoxon() {
  CheckResult r{"exact Wilcoxon = brute force", true, ""};
  Rng rng(15);
  int cases = 0;
  int mismatches = 0;
  for (int n = 2; n <= 10; ++n) {
    for (int rep = 0; rep < 12; ++rep) {
      std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        // Coarse grid values give ties; shift gives a mix of signs.
        a[static_cast<std::size_t>(i)] = rep % 3 == 0 ? std::round(rng.uniform(-3, 3)) : rng.uniform(-1, 1);
        b[static_cast<std::size_t>(i)] = rep % 3 == 0 ? std::round(rng.uniform(-3, 3)) : rng.uniform(-1, 1) + 0.3;
      }
      std::vector<double> d;
      for (int i = 0; i < n; ++i) {
        const double x = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)];
        if (x != 0.0) d.push_back(x);
      }
      if (d.size() < 1) continue;
      // Brute force: midranks by direct counting, then all 2^n sign patterns.
      const std::size_t m = d.size();
      std::vector<double> rank(m);
      for (std::size_t i = 0; i < m; ++i) {
        double less = 0.0, equal = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          if (std::abs(d[j]) < std::abs(d[i])) less += 1.0;
          if (std::abs(d[j]) == std::abs(d[i])) equal += 1.0;
        }
        rank[i] = less + (equal + 1.0) / 2.0;
      }
      double observed = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (d[i] > 0) observed += rank[i];
      }
      double le = 0.0, ge = 0.0;
      const std::size_t patterns = std::size_t{1} << m;
      for (std::size_t mask = 0; mask < patterns; ++mask) {
        double w = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          if (mask & (std::size_t{1} << i)) w += rank[i];
        }
        if (w <= observed) le += 1.0;
        if (w >= observed) ge += 1.0;
      }
      const double brute = std::min(1.0, 2.0 * std::min(le, ge) / static_cast<double>(patterns));
      const WilcoxonResult got = wilcoxon_signed_rank(a, b);
      ++cases;
      if (got.p != brute || got.statistic != observed) ++mismatches;
    }
  }
  r.passed = mismatches == 0 && cases > 0;
  r.detail = std::to_string(mismatches) + " mismatches in " + std::to_string(cases) + " cases, n <= 10";
  return r;
}

CheckResult check_csv_determinism() {
  CheckResult r{"CSV byte determinism", true, ""};
  namespace fs = std::filesystem;
  ExperimentSpec single;
  single.name = "det_single_c";
  single.protocol = Protocol::single_c;
  single.noise = NoiseCondition::shot;
  single.num_qubits = 3;
  single.seeds = 2;
  single.trials = 2;
  single.nc_list = {3, 5};
  single.n_iter = 4;

  ExperimentSpec two = single;
  two.name = "det_two_phase";
  two.protocol = Protocol::two_phase;
  two.noise = NoiseCondition::reset_shot;
  two.lambda = 1e-6;
  two.m_list = {4, 8};
  two.n_test = 3;

  std::string first;
  bool identical = true;
  int runs = 0;
  for (unsigned threads : {1U, 3U}) {
    for (int repeat = 0; repeat < 2; ++repeat) {
      std::string bytes;
      for (const ExperimentSpec* spec : {&single, &two}) {
        RunOptions opt;
        opt.master_seed = 20240601;
        opt.threads = threads;
        const fs::path path = fs::temp_directory_path() /
                              ("qra_det_" + std::to_string(::getpid()) + "_" + spec->name + "_" + std::to_string(threads) + "_" + std::to_string(repeat) + ".csv");
        emit_csv(run_experiment(*spec, opt), path);
        bytes += slurp(path);
        fs::remove(path);
      }
      ++runs;
      if (first.empty()) {
        first = bytes;
      } else if (bytes != first) {
        identical = false;
      }
    }
  }
  r.passed = identical && !first.empty();
  r.detail = std::to_string(runs) + " runs (threads 1 and 3, two repeats each), " + std::to_string(first.size()) +
             " bytes, " + (identical ? "identical" : "DIFFERENT");
  return r;
}

std::vector<CheckResult> run_invariant_suites() {
  return {check_kraus_completeness(), check_cptp_trace_preservation(), check_pure_mixed_agreement(),
          check_shot_noise_variance(), check_exact_wilcoxon(), check_csv_determinism()};
}

}  // namespace qra
