#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

#include "qra/quantum_state.hpp"
#include "qra/random.hpp"
#include "qra/types.hpp"

namespace qra {

/// Per-gate reset probabilities, fixed for the lifetime of a reservoir.
struct NoiseProfile {
  Vector p_enc;  // Nq
  Vector p_ent;  // floor(Nq/2)
  Vector p_rot;  // Nq
  Vector p_out;  // Nq

  static NoiseProfile zeros(int num_qubits);
  static NoiseProfile constant(int num_qubits, double p);

  std::size_t size() const {
    return static_cast<std::size_t>(p_enc.size() + p_ent.size() + p_rot.size() + p_out.size());
  }
  /// Throws ConfigError on wrong lengths or entries outside [0, 1].
  void validate(int num_qubits) const;
  std::vector<double> flatten() const;
};

using EntanglePairs = std::vector<std::pair<int, int>>;

struct ReservoirConfig {
  int num_qubits = 10;
  double scaling = 1.0;
  Representation mode = Representation::pure;
  std::optional<int> shots;
  EntanglePairs entangle_pairs;

  /// Pairs (0,1), (2,3), ...; the last qubit is unpaired for odd Nq.
  static EntanglePairs default_pairs(int num_qubits);
  static ReservoirConfig make(int num_qubits, Representation mode, std::optional<int> shots = std::nullopt);

  void validate() const;
};

int feature_dimension(int num_qubits);
std::size_t noise_parameter_count(int num_qubits);

NoiseProfile sample_noise_profile(int num_qubits, Rng& rng);

/// One recurrent time step. Pure states get the rotation layers only; mixed states
/// also get every reset channel, using fused per-qubit superoperators.
void reservoir_step(QuantumState& state, double u, const NoiseProfile& profile, const ReservoirConfig& config);
void reservoir_step(PureState& state, double u, const NoiseProfile& profile, const ReservoirConfig& config);
void reservoir_step(MixedState& state, double u, const NoiseProfile& profile, const ReservoirConfig& config);

/// Gate-by-gate density-matrix step (CNOT-RZ-CNOT entangler, standalone reset channels).
/// Slow; kept as the reference the fused kernel is tested against.
void reservoir_step_reference(MixedState& state, double u, const NoiseProfile& profile,
                              const ReservoirConfig& config);

/// <Z_i> for all i, <Z_i Z_j> for i<j, then 1.
Vector extract_features(const QuantumState& state);
Vector features_from_probabilities(const Eigen::VectorXd& probs, int num_qubits);

/// Exact (noise-free in the measurement sense) feature matrix, Nc x D.
FeatureMatrix run_sequence(const Vector& input, const NoiseProfile& profile, const ReservoirConfig& config);

/// Binomial estimate of every non-bias entry; the bias column is copied.
FeatureMatrix apply_shot_noise(const FeatureMatrix& features, int n_shots, Rng& rng);

/// Small recent-input cache of exact feature matrices. Exact mode matches inputs
/// bit-for-bit; tolerant mode reuses a matrix whose input is within `tolerance`.
class FeatureCache {
 public:
  explicit FeatureCache(std::size_t capacity = 8, double tolerance = 0.0)
      : capacity_(capacity), tolerance_(tolerance) {}

  const FeatureMatrix* find(const Vector& input) const;
  void insert(const Vector& input, const FeatureMatrix& features);
  std::size_t hits() const { return hits_; }

 private:
  std::size_t capacity_;
  double tolerance_;
  std::deque<std::pair<Vector, FeatureMatrix>> entries_;
  mutable std::size_t hits_ = 0;
};

/// A fixed reservoir: one noise profile plus configuration.
class Reservoir {
 public:
  Reservoir(NoiseProfile profile, ReservoirConfig config, double cache_tolerance = 0.0);

  const NoiseProfile& profile() const { return profile_; }
  const ReservoirConfig& config() const { return config_; }
  int feature_dim() const { return feature_dimension(config_.num_qubits); }

  /// Exact features (cached).
  FeatureMatrix features(const Vector& input);
  /// Exact features, then a fresh shot-noise draw when the config has shots.
  FeatureMatrix measure(const Vector& input, Rng& rng);

  std::size_t simulations() const { return simulations_; }

 private:
  NoiseProfile profile_;
  ReservoirConfig config_;
  FeatureCache cache_;
  std::size_t simulations_ = 0;
};

}  // namespace qra
