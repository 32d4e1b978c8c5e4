#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qra/errors.hpp"
#include "qra/quantum_state.hpp"

using namespace qra;
using oracle::CMat;
using std::numbers::pi;

namespace {

PureState from_vector(const Eigen::VectorXcd& v, int n) {
  PureState s(n);
  s.amplitudes() = v;
  return s;
}

MixedState from_matrix(const CMat& rho, int n) {
  MixedState s(n);
  s.rho() = rho;
  return s;
}

CMat axis_pauli(Axis a) {
  switch (a) {
    case Axis::X: return oracle::pauli_x();
    case Axis::Y: return oracle::pauli_y();
    default: return oracle::pauli_z();
  }
}

// Phase-insensitive distance between two state vectors.
double phase_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const oracle::C overlap = a.dot(b);
  const oracle::C phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : 1.0;
  return (a * phase - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("quantum-state") {
  TEST_CASE("init_plus pure and mixed") {
    const PureState one = init_plus_pure(1);
    CHECK(one.amplitudes()(0).real() == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(one.amplitudes()(1).real() == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));

    const PureState two = init_plus_pure(2);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(two.amplitudes()(i) - 0.5) < 1e-15);

    const MixedState m = init_plus_mixed(1);
    Eigen::Vector2cd plus(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
    const CMat outer = plus * plus.adjoint();
    CHECK((m.rho() - outer).cwiseAbs().maxCoeff() < 1e-15);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(m.rho()(i, j) - 0.5) < 1e-15);

    CHECK_THROWS_AS(init_plus_pure(0), ConfigError);
    CHECK_THROWS_AS(init_plus_mixed(15), ConfigError);
    CHECK_THROWS_AS(init_plus(15, Representation::pure), ConfigError);
    CHECK(std::holds_alternative<MixedState>(init_plus(3, Representation::mixed)));
  }

  TEST_CASE("single-qubit rotation examples") {
    std::mt19937_64 gen(1);
    PureState s = from_vector(oracle::random_pure(2, gen), 2);
    const Eigen::VectorXcd before = s.amplitudes();
    apply_single_qubit_rotation(s, 1, Axis::X, GateAngle(0.0));
    CHECK((s.amplitudes() - before).cwiseAbs().maxCoeff() < 1e-15);

    PureState zero(1);
    apply_single_qubit_rotation(zero, 0, Axis::X, GateAngle(pi));
    CHECK(expect_z(zero, 0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(zero.amplitudes()(1)) == doctest::Approx(1.0));

    PureState y(1);
    apply_single_qubit_rotation(y, 0, Axis::Y, GateAngle(pi / 2));
    // 2x2 oracle: RY(pi/2)|0> = (cos(pi/4), sin(pi/4)).
    const double c = std::cos(pi / 4), sn = std::sin(pi / 4);
    CHECK(std::abs(y.amplitudes()(0) - c) < 1e-15);
    CHECK(std::abs(y.amplitudes()(1) - sn) < 1e-15);
    CHECK(std::abs(expect_z(y, 0)) < 1e-15);

    CHECK_THROWS_AS(apply_single_qubit_rotation(y, 1, Axis::X, GateAngle(0.1)), IndexError);
    CHECK_THROWS_AS(apply_single_qubit_rotation(y, -1, Axis::X, GateAngle(0.1)), IndexError);
    CHECK_THROWS_AS(GateAngle{std::nan("")}, DataError);
    CHECK_THROWS_AS(GateAngle{INFINITY}, DataError);
  }

  TEST_CASE("rotations match Kronecker-product oracle") {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> ang(-7, 7);
    for (int n = 1; n <= 3; ++n) {
      for (int q = 0; q < n; ++q) {
        for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
          const double a = ang(gen);
          const CMat u = oracle::embed(oracle::rotation(axis_pauli(axis), a), q, n);
          const Eigen::VectorXcd psi = oracle::random_pure(n, gen);
          PureState p = from_vector(psi, n);
          apply_single_qubit_rotation(p, q, axis, GateAngle(a));
          CHECK((p.amplitudes() - u * psi).cwiseAbs().maxCoeff() < 1e-14);

          const CMat rho = oracle::random_density(n, gen);
          MixedState m = from_matrix(rho, n);
          apply_single_qubit_rotation(m, q, axis, GateAngle(a));
          CHECK((m.rho() - u * rho * u.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
        }
      }
    }
  }

  TEST_CASE("RZZ examples") {
    std::mt19937_64 gen(3);
    PureState s = from_vector(oracle::random_pure(3, gen), 3);
    const Eigen::VectorXcd before = s.amplitudes();
    apply_rzz(s, 0, 2, GateAngle(0.0));
    CHECK((s.amplitudes() - before).cwiseAbs().maxCoeff() < 1e-15);

    PureState zz(2);
    apply_rzz(zz, 0, 1, GateAngle(pi));
    CHECK(expect_zz(zz, 0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(zz.amplitudes()(0)) == doctest::Approx(1.0));

    PureState pp = init_plus_pure(2);
    const Eigen::VectorXcd plus = pp.amplitudes();
    apply_rzz(pp, 0, 1, GateAngle(pi / 2));
    CHECK(std::abs(expect_zz(pp, 0, 1)) < 1e-15);
    const CMat xx = oracle::kron(oracle::pauli_x(), oracle::pauli_x());
    const CMat xi = oracle::embed(oracle::pauli_x(), 0, 2);
    const Eigen::VectorXcd after = pp.amplitudes();
    CHECK(plus.dot(xi * plus).real() == doctest::Approx(1.0));
    // ZZ commutes with XX, and X_0 picks up cos(angle).
    CHECK(after.dot(xx * after).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(after.dot(xi * after).real()) < 1e-14);

    CHECK_THROWS_AS(apply_rzz(pp, 1, 1, GateAngle(0.3)), IndexError);
    CHECK_THROWS_AS(apply_rzz(pp, 0, 2, GateAngle(0.3)), IndexError);
  }

  TEST_CASE("RZZ decomposition equals exp(-i a ZZ/2) for 100 random angles") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> ang(-10, 10);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double a = ang(gen);
      const int n = 3;
      const int i = k % 3;
      const int j = (i + 1 + k % 2) % 3;
      const CMat target = oracle::rzz_diagonal(i, j, n, a);
      // Columns of the engine's unitary, one basis state at a time.
      CMat built(8, 8);
      for (int b = 0; b < 8; ++b) {
        PureState e(n);
        e.amplitudes().setZero();
        e.amplitudes()(b) = 1.0;
        apply_rzz(e, i, j, GateAngle(a));
        built.col(b) = e.amplitudes();
      }
      const oracle::C phase = built(0, 0) / target(0, 0);
      worst = std::max(worst, (built - phase * target).cwiseAbs().maxCoeff());
      CHECK(std::abs(std::abs(phase) - 1.0) < 1e-13);

      const CMat rho = oracle::random_density(n, gen);
      MixedState m = from_matrix(rho, n);
      apply_rzz(m, i, j, GateAngle(a));
      CHECK((m.rho() - target * rho * target.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    }
    CHECK(worst < 1e-13);
  }

  TEST_CASE("reset channel examples") {
    std::mt19937_64 gen(5);
    const CMat rho = oracle::random_density(1, gen);
    MixedState a = from_matrix(rho, 1);
    apply_reset_channel(a, 0, 0.0);
    CHECK((a.rho() - rho).cwiseAbs().maxCoeff() < 1e-15);

    MixedState b = from_matrix(rho, 1);
    apply_reset_channel(b, 0, 1.0);
    CHECK(std::abs(b.rho()(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(b.rho()(0, 1)) < 1e-15);
    CHECK(std::abs(b.rho()(1, 1)) < 1e-15);

    CMat one = CMat::Zero(2, 2);
    one(1, 1) = 1.0;
    MixedState c = from_matrix(one, 1);
    apply_reset_channel(c, 0, 0.5);
    // (1-p)|1><1| + p|0><0| evaluated directly.
    CHECK(std::abs(c.rho()(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(c.rho()(1, 1) - 0.5) < 1e-15);
    CHECK(std::abs(c.rho()(0, 1)) < 1e-15);

    CHECK_THROWS_AS(apply_reset_channel(c, 0, -0.1), ConfigError);
    CHECK_THROWS_AS(apply_reset_channel(c, 0, 1.1), ConfigError);
    CHECK_THROWS_AS(apply_reset_channel(c, 1, 0.5), IndexError);
    QuantumState pure = init_plus(2, Representation::pure);
    CHECK_THROWS_AS(apply_reset_channel(pure, 0, 0.5), ModeError);
  }

  TEST_CASE("expectation values") {
    PureState zero(3);
    for (int q = 0; q < 3; ++q) CHECK(expect_z(zero, q) == 1.0);
    CHECK(expect_zz(zero, 0, 2) == 1.0);

    const QuantumState plus = init_plus(4, Representation::mixed);
    for (int q = 0; q < 4; ++q) CHECK(std::abs(expect_z(plus, q)) < 1e-15);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) CHECK(std::abs(expect_zz(plus, i, j)) < 1e-15);

    for (double p : {0.0, 0.2, 0.65, 1.0}) {
      MixedState s = init_plus_mixed(2);
      apply_reset_channel(s, 1, p);
      CHECK(expect_z(s, 1) == doctest::Approx(p).epsilon(1e-14));
      CHECK(std::abs(expect_z(s, 0)) < 1e-15);
    }

    std::mt19937_64 gen(6);
    const Eigen::VectorXcd psi = oracle::random_pure(3, gen);
    const PureState s = from_vector(psi, 3);
    const CMat z1 = oracle::embed(oracle::pauli_z(), 1, 3);
    const CMat z02 = oracle::embed(oracle::pauli_z(), 0, 3) * oracle::embed(oracle::pauli_z(), 2, 3);
    CHECK(expect_z(s, 1) == doctest::Approx(psi.dot(z1 * psi).real()).epsilon(1e-14));
    CHECK(expect_zz(s, 0, 2) == doctest::Approx(psi.dot(z02 * psi).real()).epsilon(1e-14));
    CHECK_THROWS_AS(expect_zz(s, 1, 1), IndexError);
    CHECK_THROWS_AS(expect_z(s, 3), IndexError);
  }

  TEST_CASE("property: gates preserve norm, trace and Hermiticity") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0, 1);
    double worst_norm = 0.0, worst_trace = 0.0, worst_herm = 0.0;
    for (int seq = 0; seq < 1000; ++seq) {
      const int n = 1 + seq % 3;
      PureState p = init_plus_pure(n);
      MixedState m = init_plus_mixed(n);
      for (int g = 0; g < 8; ++g) {
        const double a = 8 * u(gen) - 4;
        const int q = static_cast<int>(u(gen) * n);
        if (n > 1 && u(gen) < 0.3) {
          const int j = (q + 1) % n;
          apply_rzz(p, q, j, GateAngle(a));
          apply_rzz(m, q, j, GateAngle(a));
        } else {
          const Axis axis = static_cast<Axis>(g % 3);
          apply_single_qubit_rotation(p, q, axis, GateAngle(a));
          apply_single_qubit_rotation(m, q, axis, GateAngle(a));
        }
        worst_norm = std::max(worst_norm, std::abs(p.norm() - 1.0));
        worst_trace = std::max(worst_trace, std::abs(m.trace() - 1.0));
        worst_herm = std::max(worst_herm, m.hermiticity_error());
      }
    }
    CHECK(worst_norm < 1e-12);
    CHECK(worst_trace < 1e-12);
    CHECK(worst_herm < 1e-12);
  }

  TEST_CASE("property: Kraus completeness") {
    for (double p : {0.0, 1e-9, 0.1, 0.3333, 0.5, 0.9, 1.0}) {
      const auto k = reset_kraus(p);
      Mat2 sum = Mat2::Zero();
      for (const auto& m : k) sum += m.adjoint() * m;
      CHECK((sum - Mat2::Identity()).cwiseAbs().maxCoeff() <= 1e-15);
    }
  }

  TEST_CASE("property: Kraus sum equals direct channel formula") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0.0;
    for (int k = 0; k < 300; ++k) {
      const int n = 1 + k % 3;
      const int q = k % n;
      const double p = u(gen);
      const CMat rho = oracle::random_density(n, gen);
      MixedState m = from_matrix(rho, n);
      apply_reset_channel(m, q, p);
      worst = std::max(worst, (m.rho() - oracle::reset_direct(rho, q, p)).cwiseAbs().maxCoeff());
      CHECK(m.min_eigenvalue() >= -1e-10);
    }
    CHECK(worst < 1e-13);
  }

  TEST_CASE("property: mixed evolution at p=0 equals pure outer product") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const int n = 1 + k % 3;
      PureState p = init_plus_pure(n);
      MixedState m = init_plus_mixed(n);
      for (int g = 0; g < 20; ++g) {
        const double a = 8 * u(gen) - 4;
        const int q = static_cast<int>(u(gen) * n);
        if (n > 1 && g % 4 == 0) {
          apply_rzz(p, q, (q + 1) % n, GateAngle(a));
          apply_rzz(m, q, (q + 1) % n, GateAngle(a));
        } else {
          apply_single_qubit_rotation(p, q, static_cast<Axis>(g % 3), GateAngle(a));
          apply_single_qubit_rotation(m, q, static_cast<Axis>(g % 3), GateAngle(a));
          apply_reset_channel(m, q, 0.0);
        }
      }
      worst = std::max(worst, (p.amplitudes() * p.amplitudes().adjoint() - m.rho()).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("superoperators agree with matrix conjugation") {
    std::mt19937_64 gen(10);
    std::uniform_real_distribution<double> ang(-3, 3);
    const CMat rho = oracle::random_density(3, gen);
    const Mat2 u = rotation_matrix(Axis::Y, GateAngle(0.7)) * rotation_matrix(Axis::X, GateAngle(-1.3));
    MixedState m = from_matrix(rho, 3);
    m.apply_superop(2, unitary_superop(u));
    const CMat full = oracle::embed(CMat(u), 2, 3);
    CHECK((m.rho() - full * rho * full.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

    // Conditioned superops reproduce the two-qubit diagonal phase.
    const double a = ang(gen);
    std::array<Superop, 4> sel;
    for (int rb = 0; rb < 2; ++rb) {
      for (int cb = 0; cb < 2; ++cb) {
        Superop s = Superop::Zero();
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) {
            const double zr = (rb ? -1 : 1) * (r ? -1 : 1);
            const double zc = (cb ? -1 : 1) * (c ? -1 : 1);
            s(2 * r + c, 2 * r + c) = std::exp(oracle::C(0, -a / 2 * (zr - zc)));
          }
        }
        sel[static_cast<std::size_t>(2 * rb + cb)] = s;
      }
    }
    MixedState c = from_matrix(rho, 3);
    c.apply_superop_conditioned(2, 0, sel);
    const CMat d = oracle::rzz_diagonal(0, 2, 3, a);
    CHECK((c.rho() - d * rho * d.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  }
}
