#include "qra/reservoir.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qra/errors.hpp"

namespace qra {
namespace {

void check_probability_vector(const Vector& v, Eigen::Index expected, const char* name) {
  if (v.size() != expected) {
    throw ConfigError(std::string("noise profile ") + name + " has length " + std::to_string(v.size()) +
                      ", expected " + std::to_string(expected));
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v(i) >= 0.0 && v(i) <= 1.0)) {
      throw ConfigError(std::string("noise profile ") + name + " entry out of [0, 1]");
    }
  }
}

void check_dimension(int state_qubits, const ReservoirConfig& config) {
  if (state_qubits != config.num_qubits) {
    throw ConfigError("state has " + std::to_string(state_qubits) + " qubits, reservoir expects " +
                      std::to_string(config.num_qubits));
  }
}

// Diagonal superop of exp(-i phi/2 z_i z_j) restricted to qubit j, for fixed
// control signs zr (row) and zc (column).
Superop phase_superop(double phi, double zr, double zc) {
  Superop s = Superop::Zero();
  for (int rj = 0; rj < 2; ++rj) {
    for (int cj = 0; cj < 2; ++cj) {
      const double zrj = rj ? -1.0 : 1.0;
      const double zcj = cj ? -1.0 : 1.0;
      const double arg = -0.5 * phi * (zr * zrj - zc * zcj);
      s(2 * rj + cj, 2 * rj + cj) = Complex(std::cos(arg), std::sin(arg));
    }
  }
  return s;
}

}  // namespace

NoiseProfile NoiseProfile::zeros(int num_qubits) { return constant(num_qubits, 0.0); }

NoiseProfile NoiseProfile::constant(int num_qubits, double p) {
  NoiseProfile n;
  n.p_enc = Vector::Constant(num_qubits, p);
  n.p_ent = Vector::Constant(num_qubits / 2, p);
  n.p_rot = Vector::Constant(num_qubits, p);
  n.p_out = Vector::Constant(num_qubits, p);
  return n;
}

void NoiseProfile::validate(int num_qubits) const {
  check_probability_vector(p_enc, num_qubits, "p_enc");
  check_probability_vector(p_ent, num_qubits / 2, "p_ent");
  check_probability_vector(p_rot, num_qubits, "p_rot");
  check_probability_vector(p_out, num_qubits, "p_out");
}

std::vector<double> NoiseProfile::flatten() const {
  std::vector<double> out;
  out.reserve(size());
  for (const Vector* v : {&p_enc, &p_ent, &p_rot, &p_out}) out.insert(out.end(), v->begin(), v->end());
  return out;
}

EntanglePairs ReservoirConfig::default_pairs(int num_qubits) {
  EntanglePairs pairs;
  for (int i = 0; i + 1 < num_qubits; i += 2) pairs.emplace_back(i, i + 1);
  return pairs;
}

ReservoirConfig ReservoirConfig::make(int num_qubits, Representation mode, std::optional<int> shots) {
  ReservoirConfig c;
  c.num_qubits = num_qubits;
  c.mode = mode;
  c.shots = shots;
  c.entangle_pairs = default_pairs(num_qubits);
  return c;
}

void ReservoirConfig::validate() const {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw ConfigError("num_qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
  }
  if (!std::isfinite(scaling)) throw ConfigError("scaling must be finite");
  if (shots && *shots < 1) throw ConfigError("shots must be >= 1");
  if (entangle_pairs.size() > static_cast<std::size_t>(num_qubits / 2)) {
    throw ConfigError("more entangling pairs than floor(Nq/2) noise parameters");
  }
  std::vector<bool> used(static_cast<std::size_t>(num_qubits), false);
  for (const auto& [i, j] : entangle_pairs) {
    if (i < 0 || j < 0 || i >= num_qubits || j >= num_qubits || i == j) {
      throw ConfigError("invalid entangling pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    if (used[static_cast<std::size_t>(i)] || used[static_cast<std::size_t>(j)]) {
      throw ConfigError("entangling pairs must be disjoint");
    }
    used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(j)] = true;
  }
}

int feature_dimension(int num_qubits) { return num_qubits + num_qubits * (num_qubits - 1) / 2 + 1; }

std::size_t noise_parameter_count(int num_qubits) {
  return static_cast<std::size_t>(3 * num_qubits + num_qubits / 2);
}

NoiseProfile sample_noise_profile(int num_qubits, Rng& rng) {
  NoiseProfile n = NoiseProfile::zeros(num_qubits);
  for (Vector* v : {&n.p_enc, &n.p_ent, &n.p_rot, &n.p_out}) {
    for (auto& x : *v) x = rng.uniform01();
  }
  return n;
}

void reservoir_step(PureState& state, double u, const NoiseProfile& profile, const ReservoirConfig& config) {
  check_dimension(state.num_qubits(), config);
  const int nq = config.num_qubits;
  const double theta = config.scaling * u;
  for (int q = 0; q < nq; ++q) {
    apply_single_qubit_rotation(state, q, Axis::X, GateAngle(theta * (1.0 + profile.p_enc(q))));
  }
  for (std::size_t k = 0; k < config.entangle_pairs.size(); ++k) {
    const auto [i, j] = config.entangle_pairs[k];
    apply_rzz(state, i, j, GateAngle(theta * (1.0 + profile.p_ent(static_cast<Eigen::Index>(k)))));
  }
  for (int q = 0; q < nq; ++q) {
    apply_single_qubit_rotation(state, q, Axis::Y, GateAngle(profile.p_rot(q) * std::numbers::pi));
  }
  for (int q = 0; q < nq; ++q) {
    apply_single_qubit_rotation(state, q, Axis::Z, GateAngle(theta * (1.0 + profile.p_out(q))));
  }
}

void reservoir_step(MixedState& state, double u, const NoiseProfile& profile, const ReservoirConfig& config) {
  check_dimension(state.num_qubits(), config);
  const int nq = config.num_qubits;
  const double theta = config.scaling * u;

  std::vector<Superop> first(static_cast<std::size_t>(nq));
  std::vector<Superop> last(static_cast<std::size_t>(nq));
  for (int q = 0; q < nq; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    first[uq] = reset_superop(profile.p_enc(q)) *
                unitary_superop(rotation_matrix(Axis::X, GateAngle(theta * (1.0 + profile.p_enc(q)))));
    last[uq] = reset_superop(profile.p_out(q)) *
               unitary_superop(rotation_matrix(Axis::Z, GateAngle(theta * (1.0 + profile.p_out(q))))) *
               reset_superop(profile.p_rot(q)) *
               unitary_superop(rotation_matrix(Axis::Y, GateAngle(profile.p_rot(q) * std::numbers::pi)));
  }

  std::vector<bool> paired(static_cast<std::size_t>(nq), false);
  for (std::size_t k = 0; k < config.entangle_pairs.size(); ++k) {
    const auto [i, j] = config.entangle_pairs[k];
    const auto ui = static_cast<std::size_t>(i);
    const auto uj = static_cast<std::size_t>(j);
    paired[ui] = paired[uj] = true;
    const double p = profile.p_ent(static_cast<Eigen::Index>(k));
    const double phi = theta * (1.0 + p);
    const Superop after = last[uj] * reset_superop(p);
    std::array<Superop, 4> sel;
    for (int rb = 0; rb < 2; ++rb) {
      for (int cb = 0; cb < 2; ++cb) {
        sel[static_cast<std::size_t>(2 * rb + cb)] =
            after * phase_superop(phi, rb ? -1.0 : 1.0, cb ? -1.0 : 1.0) * first[uj];
      }
    }
    state.apply_superop(i, first[ui]);
    state.apply_superop_conditioned(j, i, sel);
    state.apply_superop(i, last[ui]);
  }
  for (int q = 0; q < nq; ++q) {
    const auto uq = static_cast<std::size_t>(q);
    if (!paired[uq]) state.apply_superop(q, last[uq] * first[uq]);
  }
  state.symmetrize();
}

void reservoir_step(QuantumState& state, double u, const NoiseProfile& profile, const ReservoirConfig& config) {
  std::visit([&](auto& s) { reservoir_step(s, u, profile, config); }, state);
}

void reservoir_step_reference(MixedState& state, double u, const NoiseProfile& profile,
                              const ReservoirConfig& config) {
  check_dimension(state.num_qubits(), config);
  const int nq = config.num_qubits;
  const double theta = config.scaling * u;
  for (int q = 0; q < nq; ++q) {
    apply_single_qubit_rotation(state, q, Axis::X, GateAngle(theta * (1.0 + profile.p_enc(q))));
    apply_reset_channel(state, q, profile.p_enc(q));
  }
  for (std::size_t k = 0; k < config.entangle_pairs.size(); ++k) {
    const auto [i, j] = config.entangle_pairs[k];
    const double p = profile.p_ent(static_cast<Eigen::Index>(k));
    apply_rzz(state, i, j, GateAngle(theta * (1.0 + p)));
    apply_reset_channel(state, j, p);
  }
  for (int q = 0; q < nq; ++q) {
    apply_single_qubit_rotation(state, q, Axis::Y, GateAngle(profile.p_rot(q) * std::numbers::pi));
    apply_reset_channel(state, q, profile.p_rot(q));
  }
  for (int q = 0; q < nq; ++q) {
    apply_single_qubit_rotation(state, q, Axis::Z, GateAngle(theta * (1.0 + profile.p_out(q))));
    apply_reset_channel(state, q, profile.p_out(q));
  }
}

Vector features_from_probabilities(const Eigen::VectorXd& probs, int num_qubits) {
  const int dim = feature_dimension(num_qubits);
  Vector row = Vector::Zero(dim);
  // Signed marginals: for each basis state, z_q = +1 (bit 0) or -1 (bit 1).
  std::vector<double> z(static_cast<std::size_t>(num_qubits));
  for (Eigen::Index x = 0; x < probs.size(); ++x) {
    const double px = probs(x);
    for (int q = 0; q < num_qubits; ++q) {
      z[static_cast<std::size_t>(q)] = ((static_cast<std::size_t>(x) >> q) & 1U) ? -1.0 : 1.0;
    }
    int col = 0;
    for (int q = 0; q < num_qubits; ++q) row(col++) += px * z[static_cast<std::size_t>(q)];
    for (int i = 0; i < num_qubits; ++i) {
      const double wi = px * z[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < num_qubits; ++j) row(col++) += wi * z[static_cast<std::size_t>(j)];
    }
  }
  row(dim - 1) = 1.0;
  return row;
}

Vector extract_features(const QuantumState& state) {
  return std::visit(
      [](const auto& s) { return features_from_probabilities(s.probabilities(), s.num_qubits()); }, state);
}

FeatureMatrix run_sequence(const Vector& input, const NoiseProfile& profile, const ReservoirConfig& config) {
  config.validate();
  profile.validate(config.num_qubits);
  if (input.size() < 1) throw ConfigError("input sequence must have at least one element");
  for (double u : input) {
    if (!std::isfinite(u)) throw DataError("input sequence contains a non-finite value");
  }
  const int dim = feature_dimension(config.num_qubits);
  FeatureMatrix v(input.size(), dim);
  QuantumState state = init_plus(config.num_qubits, config.mode);
  for (Eigen::Index t = 0; t < input.size(); ++t) {
    reservoir_step(state, input(t), profile, config);
    v.row(t) = extract_features(state).transpose();
  }
  return v;
}

FeatureMatrix apply_shot_noise(const FeatureMatrix& features, int n_shots, Rng& rng) {
  if (n_shots < 1) throw ConfigError("n_shots must be >= 1");
  constexpr double kTolerance = 1e-9;
  FeatureMatrix out = features;
  const Eigen::Index bias = features.cols() - 1;
  for (Eigen::Index t = 0; t < features.rows(); ++t) {
    for (Eigen::Index c = 0; c < bias; ++c) {
      const double x = features(t, c);
      if (!std::isfinite(x) || std::abs(x) > 1.0 + kTolerance) {
        throw DataError("observable outside [-1, 1] at row " + std::to_string(t) + ", column " +
                        std::to_string(c));
      }
      const double clamped = std::clamp(x, -1.0, 1.0);
      const int counts = rng.binomial(n_shots, 0.5 * (1.0 + clamped));
      out(t, c) = 2.0 * counts / n_shots - 1.0;
    }
  }
  return out;
}

const FeatureMatrix* FeatureCache::find(const Vector& input) const {
  for (const auto& [key, value] : entries_) {
    if (key.size() != input.size()) continue;
    const bool match = tolerance_ > 0.0 ? (key - input).cwiseAbs().maxCoeff() <= tolerance_
                                        : std::equal(key.begin(), key.end(), input.begin());
    if (match) {
      ++hits_;
      return &value;
    }
  }
  return nullptr;
}

void FeatureCache::insert(const Vector& input, const FeatureMatrix& features) {
  if (capacity_ == 0) return;
  if (entries_.size() == capacity_) entries_.pop_front();
  entries_.emplace_back(input, features);
}

Reservoir::Reservoir(NoiseProfile profile, ReservoirConfig config, double cache_tolerance)
    : profile_(std::move(profile)), config_(std::move(config)), cache_(8, cache_tolerance) {
  config_.validate();
  profile_.validate(config_.num_qubits);
}

FeatureMatrix Reservoir::features(const Vector& input) {
  if (const FeatureMatrix* hit = cache_.find(input)) return *hit;
  FeatureMatrix v = run_sequence(input, profile_, config_);
  ++simulations_;
  cache_.insert(input, v);
  return v;
}

FeatureMatrix Reservoir::measure(const Vector& input, Rng& rng) {
  FeatureMatrix v = features(input);
  if (config_.shots) return apply_shot_noise(v, *config_.shots, rng);
  return v;
}

}  // namespace qra
