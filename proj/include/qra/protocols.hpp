#pragma once

#include <vector>

#include "qra/codec.hpp"
#include "qra/reservoir.hpp"
#include "qra/solvers.hpp"
#include "qra/types.hpp"

namespace qra {

inline constexpr int kDefaultPolyDegree = 7;
inline constexpr double kTwoPhaseLambda = 1e-6;
inline constexpr double kEncryptLambda = 1e-10;

/// Nq(Nq+1)/2 + 1 + K
int compute_d_aug(int num_qubits, int poly_degree);

/// [V | d^1 | ... | d^K], Nc x (D + K).
Matrix augment_features(const FeatureMatrix& v_dec, const Vector& d, int poly_degree);

/// Nc independent readout vectors, one per plaintext position.
class PerPositionDecoder {
 public:
  PerPositionDecoder(int nc, int d_aug);

  int nc() const { return nc_; }
  int d_aug() const { return d_aug_; }
  bool frozen() const { return frozen_; }

  void set_weights(int position, const Vector& w);
  const Vector& weights(int position) const;
  void freeze() { frozen_ = true; }

  /// C_i = Phi[i,:] . w_i. Throws StateError when not frozen.
  Vector apply(const Matrix& phi) const;

 private:
  int nc_;
  int d_aug_;
  bool frozen_ = false;
  std::vector<Vector> weights_;
};

/// One encrypt-then-decrypt route through two reservoirs.
struct ProtocolPath {
  const Key* enc_key;
  Reservoir* enc_reservoir;
  const Key* dec_secret;
  Reservoir* dec_reservoir;
};

struct TwoPhaseOptions {
  int poly_degree = kDefaultPolyDegree;
  double lambda = kTwoPhaseLambda;
  double encrypt_lambda = kEncryptLambda;
};

/// gamma = V W with V the (measured) encoder features of F(k, C) and W = ridge(V, F(k, C)).
Vector encrypt(const Key& key, const Vector& plaintext, Reservoir& reservoir, double lambda, Rng& rng);

/// Receiver side: d = G(s, gamma), Phi = [V_dec(d) | d^1..d^K]. Never sees the plaintext.
struct DecryptionFeatures {
  Matrix phi;
  Vector d;
};
DecryptionFeatures decryption_features(const Key& secret, const Vector& ciphertext, Reservoir& dec_reservoir,
                                       int poly_degree, Rng& rng);

/// Encrypts each plaintext along `path` and returns the receiver's augmented features.
std::vector<Matrix> path_features(const std::vector<Vector>& plaintexts, const ProtocolPath& path,
                                  const TwoPhaseOptions& options, Rng& rng);

/// Per-position ridge over the first `m` samples of phis / targets.
PerPositionDecoder fit_per_position(const std::vector<Matrix>& phis, const std::vector<Vector>& targets,
                                    std::size_t m, double lambda);

PerPositionDecoder two_phase_train(const std::vector<Vector>& training_plaintexts, const ProtocolPath& path,
                                   const TwoPhaseOptions& options, Rng& rng);

Vector two_phase_decrypt(const Vector& ciphertext, const Key& secret, const PerPositionDecoder& decoder,
                         Reservoir& dec_reservoir, int poly_degree, Rng& rng);

/// Mean over test plaintexts of the per-position MSE.
double two_phase_evaluate(const std::vector<Vector>& test_plaintexts, const PerPositionDecoder& decoder,
                          const ProtocolPath& path, const TwoPhaseOptions& options, Rng& rng);

struct BlindOptions {
  double lambda = kTwoPhaseLambda;
  double encrypt_lambda = kEncryptLambda;
  int n_iter = 40;
};

/// Per-iteration reconstructions of the ciphertext-only Single-C decoder.
struct BlindReconstruction {
  std::vector<Vector> rec1;
  std::vector<Vector> rec2;
};

/// Decoder half of the blind Single-C variant. Starts from C_est = gamma and alternates
/// W_dec,b = ridge(V_dec,b, C_est), W_dec,a = ridge(V_dec,a, V_dec,b W_dec,b).
BlindReconstruction blind_single_c_decode(const Vector& gamma, const Vector& gamma_prime, const Key& alpha,
                                          const Key& beta, Reservoir& reservoir_a, Reservoir& reservoir_b,
                                          const BlindOptions& options, Rng& rng);

/// Encrypts with the true plaintext, runs the ciphertext-only decoder and scores
/// each iteration against the plaintext.
AlsTrace blind_single_c(const Vector& plaintext, const KeySet& keys, Reservoir& reservoir_a,
                        Reservoir& reservoir_b, const BlindOptions& options, Rng& rng);

struct BlindTwoPhaseResult {
  std::vector<double> mse_path1;
  std::vector<double> mse_path2;
  std::vector<double> trace;  // mean of the two paths, per iteration

  double final_mse() const { return trace.empty() ? 0.0 : trace.back(); }
};

/// Target-free per-position decoder over training features of both paths.
/// Returns the per-iteration (rec1, estimate) matrices, M x Nc each.
struct BlindTwoPhaseIterate {
  Matrix rec1;
  Matrix estimate;
};
std::vector<BlindTwoPhaseIterate> blind_two_phase_decode(const std::vector<Matrix>& phis_path1,
                                                         const std::vector<Matrix>& phis_path2,
                                                         const std::vector<Vector>& initial_estimate,
                                                         double lambda, int n_iter);

BlindTwoPhaseResult blind_two_phase(const std::vector<Vector>& training_plaintexts, const KeySet& keys,
                                    Reservoir& reservoir_a, Reservoir& reservoir_b, const TwoPhaseOptions& tp,
                                    int n_iter, Rng& rng);

}  // namespace qra
