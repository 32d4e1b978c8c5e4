#include "qra/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "qra/codec.hpp"
#include "qra/errors.hpp"
#include "qra/protocols.hpp"
#include "qra/random.hpp"
#include "qra/reservoir.hpp"
#include "qra/solvers.hpp"

namespace qra {
namespace {

const std::vector<int> kNcGrid = {5, 8, 10, 12, 15, 18, 20, 25, 30, 35};
const std::vector<int> kMGrid = {10, 20, 30, 50, 80, 120, 160, 189, 220, 260, 300};
const std::vector<int> kMGridDensity = {10, 30, 60, 100};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("spec key '" + key + "': cannot parse '" + t + "'");
  }
  return value;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_number<int>(key, item));
  }
  return out;
}

double default_lambda(Protocol p) { return p == Protocol::single_c ? 1e-10 : kTwoPhaseLambda; }

struct Cell {
  std::uint64_t seed;
  std::uint64_t trial;
  int nc;
};

Representation representation(NoiseCondition n) {
  return n == NoiseCondition::reset_shot ? Representation::mixed : Representation::pure;
}

std::vector<ResultRecord> run_cell(const ExperimentSpec& spec, const Cell& cell, const SeedScheme& scheme,
                                   bool timing) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    if (!timing) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const int nq = spec.num_qubits;
  const int nc = cell.nc;
  ReservoirConfig config = ReservoirConfig::make(
      nq, representation(spec.noise),
      spec.noise == NoiseCondition::ideal ? std::nullopt : std::optional<int>(spec.n_shots));
  config.scaling = spec.scaling;

  Rng key_rng = scheme.stream(streams::kKeys, cell.seed, cell.trial);
  Rng train_rng = scheme.stream(streams::kPlaintextsTrain, cell.seed, cell.trial);
  Rng test_rng = scheme.stream(streams::kPlaintextsTest, cell.seed, cell.trial);
  Rng profile_a_rng = scheme.stream(streams::kNoiseProfileA, cell.seed, cell.trial);
  Rng profile_b_rng = scheme.stream(streams::kNoiseProfileB, cell.seed, cell.trial);
  Rng shot_rng = scheme.stream(streams::kShotNoise, cell.seed, cell.trial);

  const KeySet keys = KeySet::generate(nc, nq, key_rng);
  Reservoir ra(sample_noise_profile(nq, profile_a_rng), config);
  Reservoir rb(sample_noise_profile(nq, profile_b_rng), config);

  ResultRecord base;
  base.experiment = spec.name;
  base.seed = cell.seed;
  base.trial = cell.trial;
  base.nc = nc;

  std::vector<ResultRecord> out;
  auto emit_trace = [&](const AlsTrace& trace, std::optional<int> m) {
    for (std::size_t it = 0; it < trace.loss.size(); ++it) {
      ResultRecord r = base;
      r.m = m;
      r.iteration = static_cast<int>(it + 1);
      r.mse_path1 = trace.mse_path1[it];
      r.mse_path2 = trace.mse_path2[it];
      r.loss = trace.loss[it];
      r.wall_time_s = elapsed();
      out.push_back(std::move(r));
    }
  };

  switch (spec.protocol) {
    case Protocol::single_c: {
      const Vector c = generate_plaintext(nc, train_rng);
      AlsOptions opt;
      opt.lambda = spec.lambda;
      opt.n_iter = spec.n_iter;
      emit_trace(als_single_c(c, keys, ra, rb, opt, shot_rng), std::nullopt);
      break;
    }
    case Protocol::blind_single_c: {
      const Vector c = generate_plaintext(nc, train_rng);
      BlindOptions opt;
      opt.lambda = spec.lambda;
      opt.n_iter = spec.n_iter;
      emit_trace(blind_single_c(c, keys, ra, rb, opt, shot_rng), std::nullopt);
      break;
    }
    case Protocol::two_phase: {
      const int m_max = *std::max_element(spec.m_list.begin(), spec.m_list.end());
      std::vector<Vector> train, test;
      for (int j = 0; j < m_max; ++j) train.push_back(generate_plaintext(nc, train_rng));
      for (int j = 0; j < spec.n_test; ++j) test.push_back(generate_plaintext(nc, test_rng));
      TwoPhaseOptions opt;
      opt.poly_degree = spec.poly_degree;
      opt.lambda = spec.lambda;
      const ProtocolPath path1{&keys.a, &ra, &keys.beta, &rb};
      const ProtocolPath path2{&keys.b, &rb, &keys.alpha, &ra};
      const auto train1 = path_features(train, path1, opt, shot_rng);
      const auto train2 = path_features(train, path2, opt, shot_rng);
      const auto test1 = path_features(test, path1, opt, shot_rng);
      const auto test2 = path_features(test, path2, opt, shot_rng);
      auto held_out = [&](const PerPositionDecoder& dec, const std::vector<Matrix>& phis) {
        double acc = 0.0;
        for (std::size_t j = 0; j < test.size(); ++j) acc += mean_squared_error(dec.apply(phis[j]), test[j]);
        return acc / static_cast<double>(test.size());
      };
      for (int m : spec.m_list) {
        const auto um = static_cast<std::size_t>(m);
        ResultRecord r = base;
        r.m = m;
        r.mse_path1 = held_out(fit_per_position(train1, train, um, spec.lambda), test1);
        r.mse_path2 = held_out(fit_per_position(train2, train, um, spec.lambda), test2);
        r.loss = 0.5 * (r.mse_path1 + r.mse_path2);
        r.wall_time_s = elapsed();
        out.push_back(std::move(r));
      }
      break;
    }
    case Protocol::blind_two_phase: {
      const int m_max = *std::max_element(spec.m_list.begin(), spec.m_list.end());
      std::vector<Vector> train;
      for (int j = 0; j < m_max; ++j) train.push_back(generate_plaintext(nc, train_rng));
      TwoPhaseOptions opt;
      opt.poly_degree = spec.poly_degree;
      opt.lambda = spec.lambda;
      for (int m : spec.m_list) {
        const std::vector<Vector> subset(train.begin(), train.begin() + m);
        const BlindTwoPhaseResult res = blind_two_phase(subset, keys, ra, rb, opt, spec.n_iter, shot_rng);
        AlsTrace trace;
        trace.loss = res.trace;
        trace.mse_path1 = res.mse_path1;
        trace.mse_path2 = res.mse_path2;
        emit_trace(trace, m);
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::single_c: return "single_c";
    case Protocol::two_phase: return "two_phase";
    case Protocol::blind_single_c: return "blind_single_c";
    case Protocol::blind_two_phase: return "blind_two_phase";
  }
  return "";
}

std::string to_string(NoiseCondition n) {
  switch (n) {
    case NoiseCondition::ideal: return "ideal";
    case NoiseCondition::shot: return "shot";
    case NoiseCondition::reset_shot: return "reset_shot";
  }
  return "";
}

std::string to_string(Scale s) { return s == Scale::full ? "full" : "desk"; }

Protocol parse_protocol(const std::string& text) {
  for (Protocol p : {Protocol::single_c, Protocol::two_phase, Protocol::blind_single_c, Protocol::blind_two_phase}) {
    if (to_string(p) == text) return p;
  }
  throw ConfigError("unknown protocol '" + text + "'");
}

NoiseCondition parse_noise(const std::string& text) {
  for (NoiseCondition n : {NoiseCondition::ideal, NoiseCondition::shot, NoiseCondition::reset_shot}) {
    if (to_string(n) == text) return n;
  }
  throw ConfigError("unknown noise condition '" + text + "'");
}

Scale parse_scale(const std::string& text) {
  if (text == "full") return Scale::full;
  if (text == "desk") return Scale::desk;
  throw ConfigError("unknown scale '" + text + "'");
}

void ExperimentSpec::validate() const {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw ConfigError("num_qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
  }
  if (seeds < 1 || trials < 1) throw ConfigError("seeds and trials must be >= 1");
  if (nc_list.empty()) throw ConfigError("nc_list must not be empty");
  for (int nc : nc_list) {
    if (nc < 1) throw ConfigError("Nc values must be >= 1");
  }
  if (uses_m()) {
    if (m_list.empty()) throw ConfigError(to_string(protocol) + " needs a non-empty m_list");
    for (int m : m_list) {
      if (m < 1) throw ConfigError("M values must be >= 1");
    }
  }
  if (noise != NoiseCondition::ideal && n_shots < 1) throw ConfigError("n_shots must be >= 1");
  if (poly_degree < 0) throw ConfigError("K must be >= 0");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (n_iter < 1) throw ConfigError("n_iter must be >= 1");
  if (n_test < 1) throw ConfigError("n_test must be >= 1");
  if (!std::isfinite(scaling)) throw ConfigError("scaling must be finite");
}

std::size_t ExperimentSpec::expected_records() const {
  const auto cells = static_cast<std::size_t>(seeds) * static_cast<std::size_t>(trials) * nc_list.size();
  switch (protocol) {
    case Protocol::single_c:
    case Protocol::blind_single_c: return cells * static_cast<std::size_t>(n_iter);
    case Protocol::two_phase: return cells * m_list.size();
    case Protocol::blind_two_phase: return cells * m_list.size() * static_cast<std::size_t>(n_iter);
  }
  return 0;
}

ExperimentSpec preset(int id, Scale scale) {
  struct Row {
    Protocol protocol;
    NoiseCondition noise;
    int nq;
    int seeds;
  };
  using P = Protocol;
  using N = NoiseCondition;
  static const Row rows[kPresetCount] = {
      {P::single_c, N::ideal, 10, 16},         {P::two_phase, N::ideal, 10, 16},
      {P::single_c, N::shot, 10, 16},          {P::two_phase, N::shot, 10, 16},
      {P::single_c, N::reset_shot, 10, 16},    {P::two_phase, N::reset_shot, 10, 4},
      {P::blind_single_c, N::ideal, 5, 16},    {P::blind_single_c, N::shot, 5, 16},
      {P::blind_single_c, N::reset_shot, 5, 16}, {P::blind_single_c, N::ideal, 7, 16},
      {P::blind_single_c, N::shot, 7, 16},     {P::blind_single_c, N::reset_shot, 7, 16},
      {P::two_phase, N::ideal, 5, 16},         {P::two_phase, N::shot, 5, 16},
      {P::two_phase, N::reset_shot, 5, 16},    {P::two_phase, N::ideal, 7, 16},
      {P::two_phase, N::shot, 7, 16},          {P::two_phase, N::reset_shot, 7, 16},
      {P::blind_two_phase, N::ideal, 5, 16},   {P::blind_two_phase, N::shot, 5, 16},
      {P::blind_two_phase, N::reset_shot, 5, 16}, {P::blind_two_phase, N::ideal, 7, 16},
      {P::blind_two_phase, N::shot, 7, 16},    {P::blind_two_phase, N::reset_shot, 7, 16},
  };
  if (id < 1 || id > kPresetCount) throw ConfigError("experiment id must be in 1..24, got " + std::to_string(id));
  const Row& row = rows[id - 1];

  ExperimentSpec s;
  s.id = id;
  s.name = std::to_string(id);
  s.protocol = row.protocol;
  s.noise = row.noise;
  s.num_qubits = row.nq;
  s.seeds = row.seeds;
  s.trials = 3;
  s.nc_list = kNcGrid;
  s.lambda = default_lambda(row.protocol);
  s.n_test = row.noise == N::reset_shot ? 3 : 20;
  if (row.protocol == P::two_phase) s.m_list = kMGrid;
  if (row.protocol == P::blind_two_phase) s.m_list = {150};
  if (id == 6) {
    s.nc_list = {5, 10, 15, 20, 30};
    s.m_list = kMGridDensity;
  }
  if (scale == Scale::full) return s;

  s.trials = 1;
  const bool dense_big = row.noise == N::reset_shot && row.nq >= 10;
  s.seeds = std::min(s.seeds, dense_big ? 2 : 4);
  switch (row.protocol) {
    case P::single_c:
      s.nc_list = dense_big ? std::vector<int>{5} : std::vector<int>{5, 10, 20};
      break;
    case P::blind_single_c:
      s.nc_list = {5, 10, 20, 35};
      break;
    case P::two_phase:
      if (dense_big) {
        s.nc_list = {5};
        s.m_list = {10, 30};
      } else if (row.nq >= 10) {
        s.nc_list = {5};
        s.m_list = {30, 300};
      } else {
        s.seeds = 2;
        s.nc_list = {5, 10, 15, 25};
        s.m_list = {30, 300};
      }
      break;
    case P::blind_two_phase:
      s.seeds = 2;
      s.nc_list = {5, 10, 20};
      break;
  }
  return s;
}

ExperimentSpec parse_spec_text(const std::string& text) {
  ExperimentSpec s;
  s.name = "custom";
  bool lambda_set = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("spec line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "name") {
      s.name = value;
    } else if (key == "id") {
      s.id = parse_number<int>(key, value);
    } else if (key == "protocol") {
      s.protocol = parse_protocol(value);
    } else if (key == "noise") {
      s.noise = parse_noise(value);
    } else if (key == "num_qubits") {
      s.num_qubits = parse_number<int>(key, value);
    } else if (key == "seeds") {
      s.seeds = parse_number<int>(key, value);
    } else if (key == "trials") {
      s.trials = parse_number<int>(key, value);
    } else if (key == "nc_list") {
      s.nc_list = parse_int_list(key, value);
    } else if (key == "m_list") {
      s.m_list = parse_int_list(key, value);
    } else if (key == "n_shots") {
      s.n_shots = parse_number<int>(key, value);
    } else if (key == "K") {
      s.poly_degree = parse_number<int>(key, value);
    } else if (key == "lambda") {
      s.lambda = parse_number<double>(key, value);
      lambda_set = true;
    } else if (key == "n_iter") {
      s.n_iter = parse_number<int>(key, value);
    } else if (key == "n_test") {
      s.n_test = parse_number<int>(key, value);
    } else if (key == "scaling") {
      s.scaling = parse_number<double>(key, value);
    } else {
      throw ConfigError("spec line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (!lambda_set) s.lambda = default_lambda(s.protocol);
  if (s.id && s.name == "custom") s.name = std::to_string(*s.id);
  s.validate();
  return s;
}

ExperimentSpec load_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spec file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str());
}

std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  spec.validate();
  const SeedScheme scheme(options.master_seed);
  std::vector<Cell> cells;
  for (int s = 0; s < spec.seeds; ++s) {
    for (int t = 0; t < spec.trials; ++t) {
      for (int nc : spec.nc_list) {
        cells.push_back(Cell{static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(t), nc});
      }
    }
  }

  std::vector<std::vector<ResultRecord>> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        results[i] = run_cell(spec, cells[i], scheme, options.record_timing);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cells.size());
      }
    }
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(options.threads, static_cast<unsigned>(cells.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ResultRecord> out;
  out.reserve(spec.expected_records());
  for (auto& r : results) std::move(r.begin(), r.end(), std::back_inserter(out));
  return out;
}

}  // namespace qra
