#include "qra/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qra/errors.hpp"

namespace qra {
namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

// Minimum-norm ridge solution through the SVD: W = V_s diag(s / (s^2 + lambda)) U^T y.
// With lambda = 0 singular values below the rank threshold are dropped.
Matrix svd_solve(const Matrix& v, const Matrix& y, double lambda) {
  Eigen::BDCSVD<Matrix> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cutoff = smax * static_cast<double>(std::max(v.rows(), v.cols())) *
                        std::numeric_limits<double>::epsilon();
  Vector scale(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (lambda > 0.0) {
      scale(i) = s(i) / (s(i) * s(i) + lambda);
    } else {
      scale(i) = s(i) > cutoff ? 1.0 / s(i) : 0.0;
    }
  }
  return svd.matrixV() * scale.asDiagonal() * (svd.matrixU().transpose() * y);
}

}  // namespace

ReadoutWeights ridge_solve(const Matrix& features, const Matrix& targets, double lambda) {
  if (features.rows() < 1 || features.cols() < 1) throw ConfigError("ridge_solve needs a non-empty feature matrix");
  if (targets.rows() != features.rows()) {
    throw DataError("ridge_solve: " + std::to_string(features.rows()) + " feature rows vs " +
                    std::to_string(targets.rows()) + " target rows");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("ridge lambda must be finite and >= 0");
  if (!all_finite(features) || !all_finite(targets)) throw DataError("ridge_solve: non-finite input");

  ReadoutWeights out;
  out.lambda = lambda;
  if (lambda == 0.0) {
    out.w = svd_solve(features, targets, 0.0);
    return out;
  }

  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  if (n < d) {
    Matrix gram = features * features.transpose();
    gram.diagonal().array() += lambda;
    Eigen::LDLT<Matrix> ldlt(gram);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      out.w = features.transpose() * ldlt.solve(targets);
    }
  } else {
    Matrix normal = features.transpose() * features;
    normal.diagonal().array() += lambda;
    Eigen::LDLT<Matrix> ldlt(normal);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      out.w = ldlt.solve(features.transpose() * targets);
    }
  }
  if (out.w.size() == 0 || !all_finite(out.w)) out.w = svd_solve(features, targets, lambda);
  return out;
}

double ridge_objective(const Matrix& features, const Matrix& targets, const Matrix& w, double lambda) {
  return 0.5 * (features * w - targets).squaredNorm() + 0.5 * lambda * w.squaredNorm();
}

Projection reservoir_project(const Vector& input, const NoiseProfile& profile, const ReservoirConfig& config,
                             const Vector& targets, double lambda) {
  const FeatureMatrix v = run_sequence(input, profile, config);
  Projection p;
  p.weights = ridge_solve(v, targets, lambda);
  p.projection = v * p.weights.w.col(0);
  return p;
}

Projection reservoir_project(Reservoir& reservoir, const Vector& input, const Vector& targets, double lambda,
                             Rng& rng) {
  const FeatureMatrix v = reservoir.measure(input, rng);
  Projection p;
  p.weights = ridge_solve(v, targets, lambda);
  p.projection = v * p.weights.w.col(0);
  return p;
}

KeySet KeySet::generate(int nc, int num_qubits, Rng& rng) {
  Key a = generate_key(nc, num_qubits, rng);
  Key b = generate_key(nc, num_qubits, rng);
  Key alpha = generate_key(nc, num_qubits, rng);
  Key beta = generate_key(nc, num_qubits, rng);
  return KeySet{std::move(a), std::move(b), std::move(alpha), std::move(beta)};
}

AlsTrace als_single_c(const Vector& plaintext, const KeySet& keys, Reservoir& reservoir_a,
                      Reservoir& reservoir_b, const AlsOptions& options, Rng& shot_rng) {
  if (options.n_iter < 1) throw ConfigError("n_iter must be >= 1");
  if (reservoir_a.config().num_qubits != reservoir_b.config().num_qubits) {
    throw ConfigError("reservoirs A and B must have the same qubit count");
  }
  const Vector& c = plaintext;
  const Vector e_a = encode_f(keys.a, c);
  const Vector e_b = encode_f(keys.b, c);
  const bool noisy = reservoir_a.config().shots.has_value() || reservoir_b.config().shots.has_value();

  AlsTrace trace;
  for (int it = 0; it < options.n_iter; ++it) {
    // Path 1: encrypt on R_a with A, decrypt on R_b with beta.
    const FeatureMatrix v_a = reservoir_a.measure(e_a, shot_rng);
    const ReadoutWeights w_enc_a = ridge_solve(v_a, e_a, options.lambda);
    const Vector gamma = v_a * w_enc_a.w.col(0);
    const FeatureMatrix v_b_dec = reservoir_b.measure(decode_g(keys.beta, gamma), shot_rng);
    const ReadoutWeights w_dec_b = ridge_solve(v_b_dec, c, options.lambda);
    Vector c1 = v_b_dec * w_dec_b.w.col(0);

    // Path 2: encrypt on R_b with B, decrypt on R_a with alpha.
    const FeatureMatrix v_b = reservoir_b.measure(e_b, shot_rng);
    const ReadoutWeights w_enc_b = ridge_solve(v_b, e_b, options.lambda);
    const Vector gamma2 = v_b * w_enc_b.w.col(0);
    const FeatureMatrix v_a_dec = reservoir_a.measure(decode_g(keys.alpha, gamma2), shot_rng);
    const ReadoutWeights w_dec_a = ridge_solve(v_a_dec, c, options.lambda);
    Vector c2 = v_a_dec * w_dec_a.w.col(0);

    if (noisy && options.remeasure_on_eval) {
      const Vector g1 = reservoir_a.measure(e_a, shot_rng) * w_enc_a.w.col(0);
      c1 = reservoir_b.measure(decode_g(keys.beta, g1), shot_rng) * w_dec_b.w.col(0);
      const Vector g2 = reservoir_b.measure(e_b, shot_rng) * w_enc_b.w.col(0);
      c2 = reservoir_a.measure(decode_g(keys.alpha, g2), shot_rng) * w_dec_a.w.col(0);
    }

    const double m1 = mean_squared_error(c1, c);
    const double m2 = mean_squared_error(c2, c);
    trace.mse_path1.push_back(m1);
    trace.mse_path2.push_back(m2);
    trace.loss.push_back(0.5 * (m1 + m2));
  }
  trace.iterations = options.n_iter;
  return trace;
}

AlsTrace als_single_c(const Vector& plaintext, const KeySet& keys, const NoiseProfile& profile_a,
                      const NoiseProfile& profile_b, const ReservoirConfig& config, const AlsOptions& options,
                      Rng& shot_rng) {
  const double tol = options.share_features ? kShareFeaturesTolerance : 0.0;
  Reservoir ra(profile_a, config, tol);
  Reservoir rb(profile_b, config, tol);
  return als_single_c(plaintext, keys, ra, rb, options, shot_rng);
}

}  // namespace qra
