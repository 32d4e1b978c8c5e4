// qra: run preset or custom experiments, compare result files, run invariant suites.

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "qra/csv.hpp"
#include "qra/errors.hpp"
#include "qra/experiment.hpp"
#include "qra/report.hpp"
#include "qra/validate.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

qra::ExperimentSpec resolve_spec(const std::string& exp, qra::Scale scale) {
  int id = 0;
  const auto [ptr, ec] = std::from_chars(exp.data(), exp.data() + exp.size(), id);
  if (ec == std::errc() && ptr == exp.data() + exp.size()) return qra::preset(id, scale);
  return qra::load_spec_file(exp);
}

int cmd_run(const std::string& exp, const std::string& scale, std::uint64_t seed, const std::string& out_dir,
            unsigned threads, bool timing) {
  const qra::ExperimentSpec spec = resolve_spec(exp, qra::parse_scale(scale));
  qra::RunOptions opt;
  opt.master_seed = seed;
  opt.threads = threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
  opt.record_timing = timing;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw qra::IoError("cannot create output directory " + out_dir + ": " + ec.message());

  std::cerr << "experiment " << spec.name << ": " << qra::to_string(spec.protocol) << ", "
            << qra::to_string(spec.noise) << ", Nq=" << spec.num_qubits << ", " << spec.seeds << " seeds x "
            << spec.trials << " trials, " << spec.nc_list.size() << " Nc values, " << spec.expected_records()
            << " records\n";
  const auto records = qra::run_experiment(spec, opt);

  const std::string stem = spec.id ? "exp" + spec.name + "_" + scale : spec.name;
  const fs::path csv = fs::path(out_dir) / (stem + ".csv");
  qra::emit_csv(records, csv);
  const std::string summary = qra::summary_table(records);
  const fs::path txt = fs::path(out_dir) / (stem + "_summary.txt");
  std::ofstream out(txt);
  if (!out) throw qra::IoError("cannot open " + txt.string() + " for writing");
  out << summary;
  if (!out) throw qra::IoError("failed writing " + txt.string());
  std::cout << summary;
  std::cerr << "wrote " << csv.string() << "\n";
  return kExitOk;
}

int cmd_report(const std::string& a, const std::string& b, const std::string& metric) {
  if (metric != "log10-final-mse") throw qra::ConfigError("unsupported metric '" + metric + "'");
  const auto report = qra::significance_report(qra::read_csv(a), qra::read_csv(b));
  std::cout << report.to_text();
  return kExitOk;
}

int cmd_validate() {
  bool ok = true;
  for (const auto& check : qra::run_invariant_suites()) {
    std::cout << (check.passed ? "PASS  " : "FAIL  ") << check.name << ": " << check.detail << "\n";
    ok = ok && check.passed;
  }
  return ok ? kExitOk : kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum reservoir autoencoder simulation laboratory"};
  app.require_subcommand(1);

  std::string exp;
  std::string scale = "desk";
  std::uint64_t seed = 0;
  std::string out_dir = "results";
  unsigned threads = 0;
  bool timing = false;
  auto* run = app.add_subcommand("run", "Run a preset (1-24) or a custom spec file");
  run->add_option("--exp", exp, "Experiment id 1-24 or path to a spec file")->required();
  run->add_option("--scale", scale, "full or desk")->check(CLI::IsMember({"full", "desk"}));
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--threads", threads, "Worker threads (0 = all cores)");
  run->add_flag("--timing", timing, "Record wall_time_s (otherwise written as 0 for byte-stable output)");

  std::string csv_a, csv_b, metric = "log10-final-mse";
  auto* report = app.add_subcommand("report", "Paired significance tests between two result files");
  report->add_option("--a", csv_a, "First result CSV")->required();
  report->add_option("--b", csv_b, "Second result CSV")->required();
  report->add_option("--metric", metric, "Comparison metric")->check(CLI::IsMember({"log10-final-mse"}));

  auto* validate = app.add_subcommand("validate", "Run the invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(exp, scale, seed, out_dir, threads, timing);
    if (report->parsed()) return cmd_report(csv_a, csv_b, metric);
    if (validate->parsed()) return cmd_validate();
  } catch (const qra::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
