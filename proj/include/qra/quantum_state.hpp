#pragma once

#include <array>
#include <complex>
#include <variant>

#include <Eigen/Dense>

namespace qra {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

/// Single-qubit superoperator acting on the 2x2 block (rho[r,c]) of one qubit.
/// Element order: index 2*r + c, so S(2a+b, 2c+d) = sum_k K[a][c] * conj(K[b][d]).
using Superop = Eigen::Matrix4cd;

inline constexpr int kMaxQubits = 14;

enum class Axis { X, Y, Z };
enum class Representation { pure, mixed };

/// Rotation angle in radians; must be finite.
struct GateAngle {
  double radians = 0.0;
  GateAngle() = default;
  explicit GateAngle(double r);
};

class PureState {
 public:
  explicit PureState(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  Eigen::VectorXcd& amplitudes() { return amplitudes_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

  double norm() const { return amplitudes_.norm(); }
  Eigen::VectorXd probabilities() const;

 private:
  int num_qubits_;
  Eigen::VectorXcd amplitudes_;
};

class MixedState {
 public:
  explicit MixedState(int num_qubits);
  explicit MixedState(const PureState& pure);

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(rho_.rows()); }
  Eigen::MatrixXcd& rho() { return rho_; }
  const Eigen::MatrixXcd& rho() const { return rho_; }

  Complex trace() const { return rho_.trace(); }
  /// max |rho - rho^dagger| element.
  double hermiticity_error() const;
  /// rho <- (rho + rho^dagger) / 2
  void symmetrize();
  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;
  Eigen::VectorXd probabilities() const;

  /// rho <- S(rho) on one qubit.
  void apply_superop(int qubit, const Superop& s);
  /// Superop on `target` chosen by (bit `control` of row, bit `control` of column):
  /// sel[2*row_bit + col_bit]. Used for the fused entangling kernel, where a
  /// diagonal two-qubit phase splits into four conditioned one-qubit maps.
  void apply_superop_conditioned(int target, int control, const std::array<Superop, 4>& sel);

 private:
  int num_qubits_;
  Eigen::MatrixXcd rho_;
};

using QuantumState = std::variant<PureState, MixedState>;

PureState init_plus_pure(int num_qubits);
MixedState init_plus_mixed(int num_qubits);
QuantumState init_plus(int num_qubits, Representation rep);

Mat2 rotation_matrix(Axis axis, GateAngle angle);
std::array<Mat2, 3> reset_kraus(double p);
Superop superop_from_kraus(const Mat2* kraus, std::size_t count);
Superop unitary_superop(const Mat2& u);
Superop reset_superop(double p);

void apply_single_qubit_rotation(PureState& state, int qubit, Axis axis, GateAngle angle);
void apply_single_qubit_rotation(MixedState& state, int qubit, Axis axis, GateAngle angle);
void apply_single_qubit_rotation(QuantumState& state, int qubit, Axis axis, GateAngle angle);

void apply_unitary(PureState& state, int qubit, const Mat2& u);
void apply_unitary(MixedState& state, int qubit, const Mat2& u);

void apply_cnot(PureState& state, int control, int target);
void apply_cnot(MixedState& state, int control, int target);

/// exp(-i angle Z_i Z_j / 2), applied as CNOT_ij RZ_j(angle) CNOT_ij.
void apply_rzz(PureState& state, int qubit_i, int qubit_j, GateAngle angle);
void apply_rzz(MixedState& state, int qubit_i, int qubit_j, GateAngle angle);
void apply_rzz(QuantumState& state, int qubit_i, int qubit_j, GateAngle angle);

/// rho <- (1-p) rho + p |0><0| (x) Tr_q rho, then re-symmetrized.
void apply_reset_channel(MixedState& state, int qubit, double p);
/// Throws ModeError for a pure state.
void apply_reset_channel(QuantumState& state, int qubit, double p);

double expect_z(const PureState& state, int qubit);
double expect_z(const MixedState& state, int qubit);
double expect_z(const QuantumState& state, int qubit);
double expect_zz(const PureState& state, int qubit_i, int qubit_j);
double expect_zz(const MixedState& state, int qubit_i, int qubit_j);
double expect_zz(const QuantumState& state, int qubit_i, int qubit_j);

int num_qubits(const QuantumState& state);

}  // namespace qra
