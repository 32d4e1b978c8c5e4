#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qra/errors.hpp"
#include "qra/reservoir.hpp"

using namespace qra;
using oracle::CMat;

namespace {

NoiseProfile random_profile(int nq, std::uint64_t seed) {
  Rng rng(seed);
  return sample_noise_profile(nq, rng);
}

Vector random_input(int n, std::uint64_t seed) {
  Rng rng(seed);
  Vector v(n);
  for (auto& x : v) x = rng.uniform(-1, 1);
  return v;
}

// One reservoir step as a dense unitary built from Kronecker products (pure mode).
CMat step_unitary(double u, const NoiseProfile& p, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMat total = CMat::Identity(dim, dim);
  for (int q = 0; q < n; ++q) total = oracle::embed(oracle::rotation(oracle::pauli_x(), u * (1 + p.p_enc(q))), q, n) * total;
  for (int k = 0; k < n / 2; ++k) total = oracle::rzz_diagonal(2 * k, 2 * k + 1, n, u * (1 + p.p_ent(k))) * total;
  for (int q = 0; q < n; ++q)
    total = oracle::embed(oracle::rotation(oracle::pauli_y(), p.p_rot(q) * std::numbers::pi), q, n) * total;
  for (int q = 0; q < n; ++q) total = oracle::embed(oracle::rotation(oracle::pauli_z(), u * (1 + p.p_out(q))), q, n) * total;
  return total;
}

}  // namespace

TEST_SUITE("reservoir") {
  TEST_CASE("noise profile sizes and ranges") {
    CHECK(noise_parameter_count(10) == 35);
    CHECK(noise_parameter_count(5) == 17);
    CHECK(noise_parameter_count(7) == 24);
    for (int nq : {5, 7, 10}) {
      const NoiseProfile p = random_profile(nq, 1);
      CHECK(p.size() == noise_parameter_count(nq));
      for (double x : p.flatten()) {
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
      }
    }
    Rng rng(2);
    double sum = 0.0;
    std::size_t n = 0;
    for (int k = 0; k < 2000; ++k) {
      for (double x : sample_noise_profile(10, rng).flatten()) {
        sum += x;
        ++n;
      }
    }
    CHECK(std::abs(sum / n - 0.5) < 3 * 0.2887 / std::sqrt(static_cast<double>(n)));

    NoiseProfile bad = NoiseProfile::zeros(4);
    bad.p_rot(2) = 1.5;
    CHECK_THROWS_AS(bad.validate(4), ConfigError);
    CHECK_THROWS_AS(NoiseProfile::zeros(4).validate(5), ConfigError);
  }

  TEST_CASE("feature dimension and default pairs") {
    CHECK(feature_dimension(10) == 56);
    CHECK(feature_dimension(7) == 29);
    CHECK(feature_dimension(5) == 16);
    CHECK(ReservoirConfig::default_pairs(5) == EntanglePairs{{0, 1}, {2, 3}});
    CHECK(ReservoirConfig::default_pairs(4) == EntanglePairs{{0, 1}, {2, 3}});
    ReservoirConfig c = ReservoirConfig::make(4, Representation::pure);
    c.entangle_pairs = {{0, 1}, {1, 2}};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = ReservoirConfig::make(4, Representation::pure, 0);
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }

  TEST_CASE("reservoir_step examples") {
    const ReservoirConfig pure_cfg = ReservoirConfig::make(3, Representation::pure);
    QuantumState s = init_plus(3, Representation::pure);
    const Eigen::VectorXcd before = std::get<PureState>(s).amplitudes();
    reservoir_step(s, 0.0, NoiseProfile::zeros(3), pure_cfg);
    CHECK((std::get<PureState>(s).amplitudes() - before).cwiseAbs().maxCoeff() < 1e-15);

    // u = 0, p_rot = 1: RY(pi) on each qubit of |000> gives <Z_i> = -1.
    NoiseProfile flip = NoiseProfile::zeros(3);
    flip.p_rot.setOnes();
    PureState zero(3);
    reservoir_step(zero, 0.0, flip, pure_cfg);
    for (int q = 0; q < 3; ++q) CHECK(expect_z(zero, q) == doctest::Approx(-1.0).epsilon(1e-14));

    // Per-qubit oracle on a product state with <Z> = cos(a_q).
    PureState prod(3);
    const double angles[3] = {0.4, 1.1, 2.0};
    for (int q = 0; q < 3; ++q) apply_single_qubit_rotation(prod, q, Axis::Y, GateAngle(angles[q]));
    reservoir_step(prod, 0.0, flip, pure_cfg);
    for (int q = 0; q < 3; ++q) CHECK(expect_z(prod, q) == doctest::Approx(-std::cos(angles[q])).epsilon(1e-13));

    const ReservoirConfig mixed_cfg = ReservoirConfig::make(3, Representation::mixed);
    MixedState m = init_plus_mixed(3);
    reservoir_step(m, 0.37, NoiseProfile::constant(3, 1.0), mixed_cfg);
    for (int q = 0; q < 3; ++q) CHECK(expect_z(m, q) == doctest::Approx(1.0).epsilon(1e-14));

    QuantumState wrong = init_plus(4, Representation::pure);
    CHECK_THROWS_AS(reservoir_step(wrong, 0.1, NoiseProfile::zeros(3), pure_cfg), ConfigError);
  }

  TEST_CASE("pure step equals dense Kronecker-product circuit") {
    for (int n : {2, 3, 4}) {
      const NoiseProfile p = random_profile(n, 10 + static_cast<std::uint64_t>(n));
      const ReservoirConfig cfg = ReservoirConfig::make(n, Representation::pure);
      PureState s = init_plus_pure(n);
      Eigen::VectorXcd psi = s.amplitudes();
      for (double u : {0.3, -0.9, 0.55}) {
        reservoir_step(s, u, p, cfg);
        psi = step_unitary(u, p, n) * psi;
      }
      CHECK((s.amplitudes() - psi).cwiseAbs().maxCoeff() < 1e-13);
    }
  }

  TEST_CASE("fused density-matrix step equals gate-by-gate reference") {
    for (int n : {1, 2, 3, 4, 5}) {
      const NoiseProfile p = random_profile(n, 20 + static_cast<std::uint64_t>(n));
      const ReservoirConfig cfg = ReservoirConfig::make(n, Representation::mixed);
      MixedState fused = init_plus_mixed(n);
      MixedState ref = init_plus_mixed(n);
      for (double u : {0.8, -0.2, 0.6, -0.95}) {
        reservoir_step(fused, u, p, cfg);
        reservoir_step_reference(ref, u, p, cfg);
      }
      CHECK((fused.rho() - ref.rho()).cwiseAbs().maxCoeff() < 1e-13);
      CHECK(std::abs(fused.trace() - 1.0) < 1e-12);
      CHECK(fused.hermiticity_error() < 1e-12);
      CHECK(fused.min_eigenvalue() >= -1e-10);
    }
  }

  TEST_CASE("fused step matches reference at Nq=6 with custom scaling") {
    const NoiseProfile p = random_profile(6, 31);
    ReservoirConfig cfg = ReservoirConfig::make(6, Representation::mixed);
    cfg.scaling = 1.7;
    MixedState fused = init_plus_mixed(6);
    MixedState ref = init_plus_mixed(6);
    for (double u : {0.1, 0.9}) {
      reservoir_step(fused, u, p, cfg);
      reservoir_step_reference(ref, u, p, cfg);
    }
    CHECK((fused.rho() - ref.rho()).cwiseAbs().maxCoeff() < 1e-13);
  }

  TEST_CASE("run_sequence examples") {
    const FeatureMatrix v = run_sequence(Vector::Zero(1), NoiseProfile::zeros(4), ReservoirConfig::make(4, Representation::pure));
    CHECK(v.rows() == 1);
    CHECK(v.cols() == feature_dimension(4));
    for (Eigen::Index c = 0; c + 1 < v.cols(); ++c) CHECK(std::abs(v(0, c)) < 1e-15);
    CHECK(v(0, v.cols() - 1) == 1.0);

    const FeatureMatrix big = run_sequence(random_input(10, 3), random_profile(10, 3), ReservoirConfig::make(10, Representation::pure));
    CHECK(big.rows() == 10);
    CHECK(big.cols() == 56);
    CHECK(big.col(55).isOnes());
    CHECK(big.leftCols(55).cwiseAbs().maxCoeff() <= 1.0 + 1e-12);

    // Statefulness: the second row depends on the first input.
    const NoiseProfile p1 = random_profile(1, 4);
    const ReservoirConfig c1 = ReservoirConfig::make(1, Representation::pure);
    Vector two(2);
    two << 0.7, -0.4;
    const FeatureMatrix seq = run_sequence(two, p1, c1);
    const FeatureMatrix fresh = run_sequence(two.tail(1), p1, c1);
    CHECK(std::abs(seq(1, 0) - fresh(0, 0)) > 1e-6);

    CHECK_THROWS_AS(run_sequence(Vector(0), p1, c1), ConfigError);
  }

  TEST_CASE("feature column layout is Z_i then Z_iZ_j lexicographic then bias") {
    const int n = 4;
    const NoiseProfile p = random_profile(n, 5);
    const ReservoirConfig cfg = ReservoirConfig::make(n, Representation::pure);
    PureState s = init_plus_pure(n);
    reservoir_step(s, 0.61, p, cfg);
    const Vector row = extract_features(QuantumState(s));
    int col = 0;
    for (int q = 0; q < n; ++q) CHECK(row(col++) == doctest::Approx(expect_z(s, q)).epsilon(1e-14));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) CHECK(row(col++) == doctest::Approx(expect_zz(s, i, j)).epsilon(1e-14));
    CHECK(row(col) == 1.0);
    CHECK(col + 1 == feature_dimension(n));
  }

  TEST_CASE("shot noise examples and errors") {
    Rng rng(6);
    FeatureMatrix v(2, 3);
    v << 1.0, -1.0, 1.0, 0.3, -0.2, 1.0;
    for (int k = 0; k < 50; ++k) {
      const FeatureMatrix s = apply_shot_noise(v, 1000, rng);
      CHECK(s(0, 0) == 1.0);
      CHECK(s(0, 1) == -1.0);
      CHECK(s.col(2).isOnes());
      CHECK(s.leftCols(2).cwiseAbs().maxCoeff() <= 1.0);
    }
    FeatureMatrix edge(1, 2);
    edge << 1.0 + 5e-10, 1.0;
    CHECK(apply_shot_noise(edge, 100, rng)(0, 0) == 1.0);
    edge(0, 0) = 1.0 + 1e-6;
    CHECK_THROWS_AS(apply_shot_noise(edge, 100, rng), DataError);
    edge(0, 0) = std::nan("");
    CHECK_THROWS_AS(apply_shot_noise(edge, 100, rng), DataError);
    CHECK_THROWS_AS(apply_shot_noise(v, 0, rng), ConfigError);
  }

  TEST_CASE("property: shot-noise variance law") {
    Rng rng(7);
    constexpr int kDraws = 100000;
    for (double o : {0.0, 0.5, -0.5, 0.9, -0.9}) {
      FeatureMatrix v(1, 2);
      v << o, 1.0;
      double sum = 0.0, sum2 = 0.0;
      for (int i = 0; i < kDraws; ++i) {
        const double x = apply_shot_noise(v, 1000, rng)(0, 0);
        sum += x;
        sum2 += x * x;
      }
      const double mean = sum / kDraws;
      const double var = (sum2 - kDraws * mean * mean) / (kDraws - 1);
      const double expected = (1 - o * o) / 1000.0;
      CHECK(std::abs(var / expected - 1.0) < (o == 0.0 ? 0.05 : 0.10));
      CHECK(std::abs(mean - o) < 5 * std::sqrt(expected / kDraws));
    }
  }

  TEST_CASE("property: determinism") {
    const NoiseProfile p = random_profile(5, 8);
    const Vector in = random_input(6, 8);
    for (auto mode : {Representation::pure, Representation::mixed}) {
      const ReservoirConfig cfg = ReservoirConfig::make(5, mode, 1000);
      Reservoir r1(p, cfg), r2(p, cfg);
      Rng a(99), b(99);
      const FeatureMatrix x = r1.measure(in, a);
      const FeatureMatrix y = r2.measure(in, b);
      CHECK(std::equal(x.data(), x.data() + x.size(), y.data()));
    }
  }

  TEST_CASE("property: strong reset pushes features toward +1") {
    const int n = 4;
    const ReservoirConfig cfg = ReservoirConfig::make(n, Representation::mixed);
    double strong = 0.0, none = 0.0;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Vector in = random_input(8, 100 + s);
      strong += run_sequence(in, NoiseProfile::constant(n, 0.9), cfg).leftCols(n).cwiseAbs().mean();
      none += run_sequence(in, NoiseProfile::zeros(n), cfg).leftCols(n).cwiseAbs().mean();
    }
    CHECK(strong > none);
  }

  TEST_CASE("property: pure and mixed feature matrices agree at p=0") {
    for (int n : {1, 2, 3}) {
      const Vector in = random_input(7, 200 + static_cast<std::uint64_t>(n));
      const FeatureMatrix a = run_sequence(in, NoiseProfile::zeros(n), ReservoirConfig::make(n, Representation::pure));
      const FeatureMatrix b = run_sequence(in, NoiseProfile::zeros(n), ReservoirConfig::make(n, Representation::mixed));
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("reservoir caches exact features") {
    const NoiseProfile p = random_profile(3, 9);
    Reservoir r(p, ReservoirConfig::make(3, Representation::pure, 100));
    const Vector in = random_input(4, 9);
    Rng rng(1);
    const FeatureMatrix a = r.measure(in, rng);
    const FeatureMatrix b = r.measure(in, rng);
    CHECK(r.simulations() == 1);
    CHECK((a - b).cwiseAbs().maxCoeff() > 0.0);
    CHECK((r.features(in) - run_sequence(in, p, r.config())).cwiseAbs().maxCoeff() == 0.0);

    Reservoir tolerant(p, ReservoirConfig::make(3, Representation::pure), 1e-12);
    tolerant.features(in);
    Vector near = in;
    near(0) += 1e-13;
    tolerant.features(near);
    CHECK(tolerant.simulations() == 1);
    near(0) += 1e-9;
    tolerant.features(near);
    CHECK(tolerant.simulations() == 2);
  }
}
