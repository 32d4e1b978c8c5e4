#include "qra/quantum_state.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qra/errors.hpp"

namespace qra {
namespace {

void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw ConfigError("num_qubits must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                      std::to_string(n));
  }
}

void check_qubit(int n, int q) {
  if (q < 0 || q >= n) {
    throw IndexError("qubit index " + std::to_string(q) + " out of range for " +
                     std::to_string(n) + " qubits");
  }
}

void check_pair(int n, int i, int j) {
  check_qubit(n, i);
  check_qubit(n, j);
  if (i == j) throw IndexError("two-qubit operation needs distinct qubits, got " + std::to_string(i) + " twice");
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("reset probability must be in [0, 1], got " + std::to_string(p));
}

// 4x4 complex matrix applied to 4 complex values, done on split real/imag parts.
struct Kernel4 {
  double re[16];
  double im[16];

  explicit Kernel4(const Superop& s) {
    for (int k = 0; k < 4; ++k) {
      for (int l = 0; l < 4; ++l) {
        re[4 * k + l] = s(k, l).real();
        im[4 * k + l] = s(k, l).imag();
      }
    }
  }

  // x points at four complex values laid out as (re, im) pairs; each is updated in place.
  inline void apply(double* x0, double* x1, double* x2, double* x3) const {
    const double ar[4] = {x0[0], x1[0], x2[0], x3[0]};
    const double ai[4] = {x0[1], x1[1], x2[1], x3[1]};
    double* out[4] = {x0, x1, x2, x3};
    for (int k = 0; k < 4; ++k) {
      double yr = 0.0;
      double yi = 0.0;
      for (int l = 0; l < 4; ++l) {
        const double mr = re[4 * k + l];
        const double mi = im[4 * k + l];
        yr += mr * ar[l] - mi * ai[l];
        yi += mr * ai[l] + mi * ar[l];
      }
      out[k][0] = yr;
      out[k][1] = yi;
    }
  }
};

inline int bit(std::size_t x, int q) { return static_cast<int>((x >> q) & 1U); }

}  // namespace

GateAngle::GateAngle(double r) : radians(r) {
  if (!std::isfinite(r)) throw DataError("gate angle must be finite");
}

PureState::PureState(int num_qubits) : num_qubits_(num_qubits) {
  check_qubit_count(num_qubits);
  amplitudes_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << num_qubits);
  amplitudes_(0) = 1.0;
}

Eigen::VectorXd PureState::probabilities() const { return amplitudes_.cwiseAbs2(); }

MixedState::MixedState(int num_qubits) : num_qubits_(num_qubits) {
  check_qubit_count(num_qubits);
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  rho_ = Eigen::MatrixXcd::Zero(dim, dim);
  rho_(0, 0) = 1.0;
}

MixedState::MixedState(const PureState& pure) : num_qubits_(pure.num_qubits()) {
  rho_ = pure.amplitudes() * pure.amplitudes().adjoint();
}

double MixedState::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

void MixedState::symmetrize() {
  const Eigen::Index n = rho_.rows();
  for (Eigen::Index c = 0; c < n; ++c) {
    rho_(c, c) = Complex(rho_(c, c).real(), 0.0);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      const Complex lower = rho_(r, c);
      const Complex upper = rho_(c, r);
      const double re = 0.5 * (lower.real() + upper.real());
      const double im = 0.5 * (lower.imag() - upper.imag());
      rho_(r, c) = Complex(re, im);
      rho_(c, r) = Complex(re, -im);
    }
  }
}

double MixedState::min_eigenvalue() const {
  const Eigen::MatrixXcd h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Eigen::VectorXd MixedState::probabilities() const { return rho_.diagonal().real(); }

void MixedState::apply_superop(int qubit, const Superop& s) {
  check_qubit(num_qubits_, qubit);
  const Kernel4 k(s);
  const std::size_t n = dimension();
  const std::size_t m = std::size_t{1} << qubit;
  auto* data = reinterpret_cast<double*>(rho_.data());
  for (std::size_t c0 = 0; c0 < n; ++c0) {
    if (c0 & m) continue;
    const std::size_t c1 = c0 | m;
    double* col0 = data + 2 * c0 * n;
    double* col1 = data + 2 * c1 * n;
    for (std::size_t hi = 0; hi < n; hi += 2 * m) {
      for (std::size_t r0 = hi; r0 < hi + m; ++r0) {
        const std::size_t r1 = r0 | m;
        k.apply(col0 + 2 * r0, col1 + 2 * r0, col0 + 2 * r1, col1 + 2 * r1);
      }
    }
  }
}

void MixedState::apply_superop_conditioned(int target, int control,
                                           const std::array<Superop, 4>& sel) {
  check_pair(num_qubits_, target, control);
  const Kernel4 k[4] = {Kernel4(sel[0]), Kernel4(sel[1]), Kernel4(sel[2]), Kernel4(sel[3])};
  const std::size_t n = dimension();
  const std::size_t m = std::size_t{1} << target;
  auto* data = reinterpret_cast<double*>(rho_.data());
  for (std::size_t c0 = 0; c0 < n; ++c0) {
    if (c0 & m) continue;
    const std::size_t c1 = c0 | m;
    const int cb = bit(c0, control);
    const Kernel4& k_row0 = k[cb];
    const Kernel4& k_row1 = k[2 + cb];
    double* col0 = data + 2 * c0 * n;
    double* col1 = data + 2 * c1 * n;
    for (std::size_t hi = 0; hi < n; hi += 2 * m) {
      for (std::size_t r0 = hi; r0 < hi + m; ++r0) {
        const std::size_t r1 = r0 | m;
        const Kernel4& kk = bit(r0, control) ? k_row1 : k_row0;
        kk.apply(col0 + 2 * r0, col1 + 2 * r0, col0 + 2 * r1, col1 + 2 * r1);
      }
    }
  }
}

PureState init_plus_pure(int num_qubits) {
  PureState s(num_qubits);
  s.amplitudes().setConstant(Complex(std::pow(2.0, -0.5 * num_qubits), 0.0));
  return s;
}

MixedState init_plus_mixed(int num_qubits) {
  check_qubit_count(num_qubits);
  MixedState s(num_qubits);
  s.rho().setConstant(Complex(std::pow(2.0, -static_cast<double>(num_qubits)), 0.0));
  return s;
}

QuantumState init_plus(int num_qubits, Representation rep) {
  if (rep == Representation::pure) return init_plus_pure(num_qubits);
  return init_plus_mixed(num_qubits);
}

Mat2 rotation_matrix(Axis axis, GateAngle angle) {
  const double c = std::cos(0.5 * angle.radians);
  const double s = std::sin(0.5 * angle.radians);
  const Complex i(0.0, 1.0);
  Mat2 u;
  switch (axis) {
    case Axis::X:
      u << c, -i * s, -i * s, c;
      break;
    case Axis::Y:
      u << c, -s, s, c;
      break;
    case Axis::Z:
      u << Complex(c, -s), 0.0, 0.0, Complex(c, s);
      break;
  }
  return u;
}

std::array<Mat2, 3> reset_kraus(double p) {
  check_probability(p);
  std::array<Mat2, 3> k;
  const double a = std::sqrt(1.0 - p);
  const double b = std::sqrt(p);
  k[0] << a, 0.0, 0.0, a;
  k[1] << b, 0.0, 0.0, 0.0;
  k[2] << 0.0, b, 0.0, 0.0;
  return k;
}

Superop superop_from_kraus(const Mat2* kraus, std::size_t count) {
  Superop s = Superop::Zero();
  for (std::size_t n = 0; n < count; ++n) {
    const Mat2& k = kraus[n];
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) s(2 * a + b, 2 * c + d) += k(a, c) * std::conj(k(b, d));
  }
  return s;
}

Superop unitary_superop(const Mat2& u) { return superop_from_kraus(&u, 1); }

Superop reset_superop(double p) {
  const auto k = reset_kraus(p);
  return superop_from_kraus(k.data(), k.size());
}

void apply_unitary(PureState& state, int qubit, const Mat2& u) {
  check_qubit(state.num_qubits(), qubit);
  const std::size_t n = state.dimension();
  const std::size_t m = std::size_t{1} << qubit;
  auto& psi = state.amplitudes();
  for (std::size_t hi = 0; hi < n; hi += 2 * m) {
    for (std::size_t i0 = hi; i0 < hi + m; ++i0) {
      const std::size_t i1 = i0 | m;
      const Complex a0 = psi(i0);
      const Complex a1 = psi(i1);
      psi(i0) = u(0, 0) * a0 + u(0, 1) * a1;
      psi(i1) = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
}

void apply_unitary(MixedState& state, int qubit, const Mat2& u) {
  state.apply_superop(qubit, unitary_superop(u));
}

void apply_single_qubit_rotation(PureState& state, int qubit, Axis axis, GateAngle angle) {
  apply_unitary(state, qubit, rotation_matrix(axis, angle));
}

void apply_single_qubit_rotation(MixedState& state, int qubit, Axis axis, GateAngle angle) {
  apply_unitary(state, qubit, rotation_matrix(axis, angle));
}

void apply_single_qubit_rotation(QuantumState& state, int qubit, Axis axis, GateAngle angle) {
  std::visit([&](auto& s) { apply_single_qubit_rotation(s, qubit, axis, angle); }, state);
}

void apply_cnot(PureState& state, int control, int target) {
  check_pair(state.num_qubits(), control, target);
  const std::size_t cm = std::size_t{1} << control;
  const std::size_t tm = std::size_t{1} << target;
  auto& psi = state.amplitudes();
  for (std::size_t x = 0; x < state.dimension(); ++x) {
    if ((x & cm) && !(x & tm)) std::swap(psi(x), psi(x | tm));
  }
}

void apply_cnot(MixedState& state, int control, int target) {
  check_pair(state.num_qubits(), control, target);
  const std::size_t cm = std::size_t{1} << control;
  const std::size_t tm = std::size_t{1} << target;
  auto& rho = state.rho();
  const auto n = static_cast<Eigen::Index>(state.dimension());
  for (Eigen::Index x = 0; x < n; ++x) {
    const auto ux = static_cast<std::size_t>(x);
    if ((ux & cm) && !(ux & tm)) {
      const auto y = static_cast<Eigen::Index>(ux | tm);
      rho.row(x).swap(rho.row(y));
    }
  }
  for (Eigen::Index x = 0; x < n; ++x) {
    const auto ux = static_cast<std::size_t>(x);
    if ((ux & cm) && !(ux & tm)) {
      const auto y = static_cast<Eigen::Index>(ux | tm);
      rho.col(x).swap(rho.col(y));
    }
  }
}

void apply_rzz(PureState& state, int qubit_i, int qubit_j, GateAngle angle) {
  check_pair(state.num_qubits(), qubit_i, qubit_j);
  apply_cnot(state, qubit_i, qubit_j);
  apply_single_qubit_rotation(state, qubit_j, Axis::Z, angle);
  apply_cnot(state, qubit_i, qubit_j);
}

void apply_rzz(MixedState& state, int qubit_i, int qubit_j, GateAngle angle) {
  check_pair(state.num_qubits(), qubit_i, qubit_j);
  apply_cnot(state, qubit_i, qubit_j);
  apply_single_qubit_rotation(state, qubit_j, Axis::Z, angle);
  apply_cnot(state, qubit_i, qubit_j);
}

void apply_rzz(QuantumState& state, int qubit_i, int qubit_j, GateAngle angle) {
  std::visit([&](auto& s) { apply_rzz(s, qubit_i, qubit_j, angle); }, state);
}

void apply_reset_channel(MixedState& state, int qubit, double p) {
  check_probability(p);
  check_qubit(state.num_qubits(), qubit);
  state.apply_superop(qubit, reset_superop(p));
  state.symmetrize();
}

void apply_reset_channel(QuantumState& state, int qubit, double p) {
  auto* mixed = std::get_if<MixedState>(&state);
  if (mixed == nullptr) throw ModeError("reset channel requires a density-matrix state");
  apply_reset_channel(*mixed, qubit, p);
}

namespace {

double z_expectation(const Eigen::VectorXd& probs, std::size_t mask) {
  double acc = 0.0;
  for (Eigen::Index x = 0; x < probs.size(); ++x) {
    const bool odd = std::popcount(static_cast<std::size_t>(x) & mask) & 1;
    acc += odd ? -probs(x) : probs(x);
  }
  return acc;
}

}  // namespace

double expect_z(const PureState& state, int qubit) {
  check_qubit(state.num_qubits(), qubit);
  return z_expectation(state.probabilities(), std::size_t{1} << qubit);
}

double expect_z(const MixedState& state, int qubit) {
  check_qubit(state.num_qubits(), qubit);
  return z_expectation(state.probabilities(), std::size_t{1} << qubit);
}

double expect_z(const QuantumState& state, int qubit) {
  return std::visit([&](const auto& s) { return expect_z(s, qubit); }, state);
}

double expect_zz(const PureState& state, int qubit_i, int qubit_j) {
  check_pair(state.num_qubits(), qubit_i, qubit_j);
  return z_expectation(state.probabilities(), (std::size_t{1} << qubit_i) | (std::size_t{1} << qubit_j));
}

double expect_zz(const MixedState& state, int qubit_i, int qubit_j) {
  check_pair(state.num_qubits(), qubit_i, qubit_j);
  return z_expectation(state.probabilities(), (std::size_t{1} << qubit_i) | (std::size_t{1} << qubit_j));
}

double expect_zz(const QuantumState& state, int qubit_i, int qubit_j) {
  return std::visit([&](const auto& s) { return expect_zz(s, qubit_i, qubit_j); }, state);
}

int num_qubits(const QuantumState& state) {
  return std::visit([](const auto& s) { return s.num_qubits(); }, state);
}

}  // namespace qra
