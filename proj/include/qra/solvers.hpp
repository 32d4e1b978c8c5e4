#pragma once

#include <vector>

#include "qra/codec.hpp"
#include "qra/reservoir.hpp"
#include "qra/types.hpp"

namespace qra {

struct ReadoutWeights {
  Matrix w;  // D x T
  double lambda = 0.0;

  Matrix apply(const Matrix& features) const { return features * w; }
  Vector column(Eigen::Index t = 0) const { return w.col(t); }
};

/// Ridge readout W = (V^T V + lambda I)^-1 V^T y.
/// Solved in the kernel (dual) form when V has fewer rows than columns; LDLT with an
/// SVD fallback, and a rank-revealing minimum-norm path for lambda = 0.
ReadoutWeights ridge_solve(const Matrix& features, const Matrix& targets, double lambda);

/// 0.5 * ||V W - y||^2 + 0.5 * lambda * ||W||^2
double ridge_objective(const Matrix& features, const Matrix& targets, const Matrix& w, double lambda);

struct Projection {
  Vector projection;
  ReadoutWeights weights;
};

/// V = run_sequence(input); W = ridge(V, targets); returns V W.
Projection reservoir_project(const Vector& input, const NoiseProfile& profile, const ReservoirConfig& config,
                             const Vector& targets, double lambda);
/// Same on a Reservoir, with shot noise drawn from rng when the reservoir has shots.
Projection reservoir_project(Reservoir& reservoir, const Vector& input, const Vector& targets, double lambda,
                             Rng& rng);

/// Distributed keys A, B and secret keys alpha, beta.
struct KeySet {
  Key a;
  Key b;
  Key alpha;
  Key beta;

  static KeySet generate(int nc, int num_qubits, Rng& rng);
};

struct AlsTrace {
  std::vector<double> loss;
  std::vector<double> mse_path1;
  std::vector<double> mse_path2;
  int iterations = 0;

  double final_loss() const { return loss.empty() ? 0.0 : loss.back(); }
};

struct AlsOptions {
  double lambda = 1e-10;
  int n_iter = 40;
  // Under shot noise, score each iteration with a fresh end-to-end measurement through
  // the weights it just solved, rather than with the matrices they were fitted on.
  bool remeasure_on_eval = true;
  // Reuse exact feature matrices whose inputs agree within 1e-12.
  bool share_features = false;
};

inline constexpr double kShareFeaturesTolerance = 1e-12;

/// Four-equation ALS for one known plaintext. Per iteration the readouts are solved
/// in the order W_enc,a, W_dec,b, W_enc,b, W_dec,a.
AlsTrace als_single_c(const Vector& plaintext, const KeySet& keys, Reservoir& reservoir_a,
                      Reservoir& reservoir_b, const AlsOptions& options, Rng& shot_rng);

AlsTrace als_single_c(const Vector& plaintext, const KeySet& keys, const NoiseProfile& profile_a,
                      const NoiseProfile& profile_b, const ReservoirConfig& config, const AlsOptions& options,
                      Rng& shot_rng);

}  // namespace qra
