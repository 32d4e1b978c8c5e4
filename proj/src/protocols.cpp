#include "qra/protocols.hpp"

#include <string>

#include "qra/errors.hpp"

namespace qra {

int compute_d_aug(int num_qubits, int poly_degree) {
  if (num_qubits < 1) throw ConfigError("num_qubits must be >= 1");
  if (poly_degree < 0) throw ConfigError("polynomial degree must be >= 0");
  return num_qubits * (num_qubits + 1) / 2 + 1 + poly_degree;
}

Matrix augment_features(const FeatureMatrix& v_dec, const Vector& d, int poly_degree) {
  if (v_dec.rows() != d.size()) throw DataError("augment_features: feature rows and decoded length differ");
  if (poly_degree < 0) throw ConfigError("polynomial degree must be >= 0");
  Matrix phi(v_dec.rows(), v_dec.cols() + poly_degree);
  phi.leftCols(v_dec.cols()) = v_dec;
  Vector power = Vector::Ones(d.size());
  for (int k = 1; k <= poly_degree; ++k) {
    power = power.cwiseProduct(d);
    phi.col(v_dec.cols() + k - 1) = power;
  }
  return phi;
}

PerPositionDecoder::PerPositionDecoder(int nc, int d_aug)
    : nc_(nc), d_aug_(d_aug), weights_(static_cast<std::size_t>(nc), Vector::Zero(d_aug)) {
  if (nc < 1 || d_aug < 1) throw ConfigError("decoder sizes must be positive");
}

void PerPositionDecoder::set_weights(int position, const Vector& w) {
  if (frozen_) throw StateError("decoder is frozen");
  if (position < 0 || position >= nc_) throw IndexError("decoder position out of range");
  if (w.size() != d_aug_) throw DataError("decoder weight vector has the wrong length");
  weights_[static_cast<std::size_t>(position)] = w;
}

const Vector& PerPositionDecoder::weights(int position) const {
  if (position < 0 || position >= nc_) throw IndexError("decoder position out of range");
  return weights_[static_cast<std::size_t>(position)];
}

Vector PerPositionDecoder::apply(const Matrix& phi) const {
  if (!frozen_) throw StateError("decoder must be frozen before decryption");
  if (phi.rows() != nc_ || phi.cols() != d_aug_) throw DataError("feature matrix shape does not match decoder");
  Vector out(nc_);
  for (int i = 0; i < nc_; ++i) out(i) = phi.row(i).dot(weights_[static_cast<std::size_t>(i)]);
  return out;
}

Vector encrypt(const Key& key, const Vector& plaintext, Reservoir& reservoir, double lambda, Rng& rng) {
  return reservoir_project(reservoir, encode_f(key, plaintext), encode_f(key, plaintext), lambda, rng).projection;
}

DecryptionFeatures decryption_features(const Key& secret, const Vector& ciphertext, Reservoir& dec_reservoir,
                                       int poly_degree, Rng& rng) {
  DecryptionFeatures out;
  out.d = decode_g(secret, ciphertext);
  out.phi = augment_features(dec_reservoir.measure(out.d, rng), out.d, poly_degree);
  return out;
}

PerPositionDecoder fit_per_position(const std::vector<Matrix>& phis, const std::vector<Vector>& targets,
                                    std::size_t m, double lambda) {
  if (m < 1) throw ConfigError("need at least one training sample");
  if (m > phis.size() || m > targets.size()) throw ConfigError("fewer training samples than requested");
  const auto nc = static_cast<int>(phis.front().rows());
  const auto d_aug = static_cast<int>(phis.front().cols());
  PerPositionDecoder decoder(nc, d_aug);
  Matrix x(static_cast<Eigen::Index>(m), d_aug);
  Vector y(static_cast<Eigen::Index>(m));
  for (int i = 0; i < nc; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      x.row(static_cast<Eigen::Index>(j)) = phis[j].row(i);
      y(static_cast<Eigen::Index>(j)) = targets[j](i);
    }
    decoder.set_weights(i, ridge_solve(x, y, lambda).w.col(0));
  }
  decoder.freeze();
  return decoder;
}

std::vector<Matrix> path_features(const std::vector<Vector>& plaintexts, const ProtocolPath& path,
                                  const TwoPhaseOptions& options, Rng& rng) {
  std::vector<Matrix> phis;
  phis.reserve(plaintexts.size());
  for (const Vector& c : plaintexts) {
    const Vector gamma = encrypt(*path.enc_key, c, *path.enc_reservoir, options.encrypt_lambda, rng);
    phis.push_back(decryption_features(*path.dec_secret, gamma, *path.dec_reservoir, options.poly_degree, rng).phi);
  }
  return phis;
}

PerPositionDecoder two_phase_train(const std::vector<Vector>& training_plaintexts, const ProtocolPath& path,
                                   const TwoPhaseOptions& options, Rng& rng) {
  if (training_plaintexts.empty()) throw ConfigError("two-phase training needs M >= 1 plaintexts");
  const auto phis = path_features(training_plaintexts, path, options, rng);
  return fit_per_position(phis, training_plaintexts, training_plaintexts.size(), options.lambda);
}

Vector two_phase_decrypt(const Vector& ciphertext, const Key& secret, const PerPositionDecoder& decoder,
                         Reservoir& dec_reservoir, int poly_degree, Rng& rng) {
  if (!decoder.frozen()) throw StateError("decoder must be frozen before decryption");
  return decoder.apply(decryption_features(secret, ciphertext, dec_reservoir, poly_degree, rng).phi);
}

double two_phase_evaluate(const std::vector<Vector>& test_plaintexts, const PerPositionDecoder& decoder,
                          const ProtocolPath& path, const TwoPhaseOptions& options, Rng& rng) {
  if (test_plaintexts.empty()) throw ConfigError("need at least one test plaintext");
  double acc = 0.0;
  for (const Vector& c : test_plaintexts) {
    const Vector gamma = encrypt(*path.enc_key, c, *path.enc_reservoir, options.encrypt_lambda, rng);
    const Vector estimate =
        two_phase_decrypt(gamma, *path.dec_secret, decoder, *path.dec_reservoir, options.poly_degree, rng);
    acc += mean_squared_error(estimate, c);
  }
  return acc / static_cast<double>(test_plaintexts.size());
}

BlindReconstruction blind_single_c_decode(const Vector& gamma, const Vector& gamma_prime, const Key& alpha,
                                          const Key& beta, Reservoir& reservoir_a, Reservoir& reservoir_b,
                                          const BlindOptions& options, Rng& rng) {
  if (options.n_iter < 1) throw ConfigError("n_iter must be >= 1");
  const Vector d_b = decode_g(beta, gamma);
  const Vector d_a = decode_g(alpha, gamma_prime);
  BlindReconstruction out;
  Vector estimate = gamma;
  for (int it = 0; it < options.n_iter; ++it) {
    const FeatureMatrix v_dec_b = reservoir_b.measure(d_b, rng);
    const Vector rec1 = v_dec_b * ridge_solve(v_dec_b, estimate, options.lambda).w.col(0);
    const FeatureMatrix v_dec_a = reservoir_a.measure(d_a, rng);
    const Vector rec2 = v_dec_a * ridge_solve(v_dec_a, rec1, options.lambda).w.col(0);
    out.rec1.push_back(rec1);
    out.rec2.push_back(rec2);
    estimate = rec2;
  }
  return out;
}

AlsTrace blind_single_c(const Vector& plaintext, const KeySet& keys, Reservoir& reservoir_a,
                        Reservoir& reservoir_b, const BlindOptions& options, Rng& rng) {
  const Vector gamma = encrypt(keys.a, plaintext, reservoir_a, options.encrypt_lambda, rng);
  const Vector gamma_prime = encrypt(keys.b, plaintext, reservoir_b, options.encrypt_lambda, rng);
  const BlindReconstruction rec =
      blind_single_c_decode(gamma, gamma_prime, keys.alpha, keys.beta, reservoir_a, reservoir_b, options, rng);
  AlsTrace trace;
  for (std::size_t it = 0; it < rec.rec1.size(); ++it) {
    const double m1 = mean_squared_error(rec.rec1[it], plaintext);
    const double m2 = mean_squared_error(rec.rec2[it], plaintext);
    trace.mse_path1.push_back(m1);
    trace.mse_path2.push_back(m2);
    trace.loss.push_back(0.5 * (m1 + m2));
  }
  trace.iterations = options.n_iter;
  return trace;
}

std::vector<BlindTwoPhaseIterate> blind_two_phase_decode(const std::vector<Matrix>& phis_path1,
                                                         const std::vector<Matrix>& phis_path2,
                                                         const std::vector<Vector>& initial_estimate,
                                                         double lambda, int n_iter) {
  if (n_iter < 1) throw ConfigError("n_iter must be >= 1");
  const std::size_t m = phis_path1.size();
  if (m < 1 || phis_path2.size() != m || initial_estimate.size() != m) {
    throw ConfigError("blind two-phase decoder needs matching, non-empty sample sets");
  }
  const Eigen::Index nc = phis_path1.front().rows();
  const auto mi = static_cast<Eigen::Index>(m);
  Matrix estimate(mi, nc);
  for (std::size_t j = 0; j < m; ++j) estimate.row(static_cast<Eigen::Index>(j)) = initial_estimate[j].transpose();

  // Per-position design matrices are fixed across iterations.
  std::vector<Matrix> x1(static_cast<std::size_t>(nc)), x2(static_cast<std::size_t>(nc));
  for (Eigen::Index i = 0; i < nc; ++i) {
    Matrix& a = x1[static_cast<std::size_t>(i)];
    Matrix& b = x2[static_cast<std::size_t>(i)];
    a.resize(mi, phis_path1.front().cols());
    b.resize(mi, phis_path2.front().cols());
    for (std::size_t j = 0; j < m; ++j) {
      a.row(static_cast<Eigen::Index>(j)) = phis_path1[j].row(i);
      b.row(static_cast<Eigen::Index>(j)) = phis_path2[j].row(i);
    }
  }

  std::vector<BlindTwoPhaseIterate> out;
  for (int it = 0; it < n_iter; ++it) {
    BlindTwoPhaseIterate step{Matrix(mi, nc), Matrix(mi, nc)};
    for (Eigen::Index i = 0; i < nc; ++i) {
      const Matrix& a = x1[static_cast<std::size_t>(i)];
      step.rec1.col(i) = a * ridge_solve(a, estimate.col(i), lambda).w.col(0);
    }
    for (Eigen::Index i = 0; i < nc; ++i) {
      const Matrix& b = x2[static_cast<std::size_t>(i)];
      step.estimate.col(i) = b * ridge_solve(b, step.rec1.col(i), lambda).w.col(0);
    }
    estimate = step.estimate;
    out.push_back(std::move(step));
  }
  return out;
}

BlindTwoPhaseResult blind_two_phase(const std::vector<Vector>& training_plaintexts, const KeySet& keys,
                                    Reservoir& reservoir_a, Reservoir& reservoir_b, const TwoPhaseOptions& tp,
                                    int n_iter, Rng& rng) {
  if (training_plaintexts.empty()) throw ConfigError("blind two-phase needs M >= 1 plaintexts");
  std::vector<Matrix> phis1, phis2;
  std::vector<Vector> d1;
  for (const Vector& c : training_plaintexts) {
    const Vector g1 = encrypt(keys.a, c, reservoir_a, tp.encrypt_lambda, rng);
    DecryptionFeatures f1 = decryption_features(keys.beta, g1, reservoir_b, tp.poly_degree, rng);
    const Vector g2 = encrypt(keys.b, c, reservoir_b, tp.encrypt_lambda, rng);
    DecryptionFeatures f2 = decryption_features(keys.alpha, g2, reservoir_a, tp.poly_degree, rng);
    phis1.push_back(std::move(f1.phi));
    d1.push_back(std::move(f1.d));
    phis2.push_back(std::move(f2.phi));
  }
  const auto iterates = blind_two_phase_decode(phis1, phis2, d1, tp.lambda, n_iter);

  Matrix truth(static_cast<Eigen::Index>(training_plaintexts.size()), training_plaintexts.front().size());
  for (std::size_t j = 0; j < training_plaintexts.size(); ++j) {
    truth.row(static_cast<Eigen::Index>(j)) = training_plaintexts[j].transpose();
  }
  BlindTwoPhaseResult result;
  const auto count = static_cast<double>(truth.size());
  for (const auto& step : iterates) {
    const double m1 = (step.rec1 - truth).squaredNorm() / count;
    const double m2 = (step.estimate - truth).squaredNorm() / count;
    result.mse_path1.push_back(m1);
    result.mse_path2.push_back(m2);
    result.trace.push_back(0.5 * (m1 + m2));
  }
  return result;
}

}  // namespace qra
