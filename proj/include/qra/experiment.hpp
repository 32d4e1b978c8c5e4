#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace qra {

enum class Protocol { single_c, two_phase, blind_single_c, blind_two_phase };
enum class NoiseCondition { ideal, shot, reset_shot };
enum class Scale { full, desk };

std::string to_string(Protocol p);
std::string to_string(NoiseCondition n);
std::string to_string(Scale s);
Protocol parse_protocol(const std::string& text);
NoiseCondition parse_noise(const std::string& text);
Scale parse_scale(const std::string& text);

struct ExperimentSpec {
  std::string name;  // "1".."24" for the preset grid, free text for custom specs
  std::optional<int> id;
  Protocol protocol = Protocol::single_c;
  NoiseCondition noise = NoiseCondition::ideal;
  int num_qubits = 10;
  int seeds = 1;
  int trials = 1;
  std::vector<int> nc_list;
  std::vector<int> m_list;
  int n_shots = 1000;
  int poly_degree = 7;
  double lambda = 1e-10;
  int n_iter = 40;
  int n_test = 20;
  double scaling = 1.0;

  bool uses_m() const { return protocol == Protocol::two_phase || protocol == Protocol::blind_two_phase; }
  bool iterative() const { return protocol != Protocol::two_phase; }
  /// Throws ConfigError for inconsistent or infeasible specs.
  void validate() const;
  /// Number of records run_experiment produces.
  std::size_t expected_records() const;
};

inline constexpr int kPresetCount = 24;

/// Table of the 24 preset experiments at full or desk scale.
ExperimentSpec preset(int id, Scale scale);

/// Flat `key = value` text, lists comma-separated, '#' starts a comment.
ExperimentSpec parse_spec_text(const std::string& text);
ExperimentSpec load_spec_file(const std::filesystem::path& path);

struct ResultRecord {
  std::string experiment;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  int nc = 0;
  std::optional<int> m;
  std::optional<int> iteration;
  double mse_path1 = 0.0;
  double mse_path2 = 0.0;
  double loss = 0.0;
  double wall_time_s = 0.0;

  bool operator==(const ResultRecord&) const = default;
};

struct RunOptions {
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  bool record_timing = false;
};

/// Runs every (seed, trial, Nc) cell on a worker pool and returns records in canonical
/// (seed, trial, Nc, M, iteration) order, independent of the thread count.
std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec, const RunOptions& options);

}  // namespace qra
