#pragma once

// Two-qubit density matrices: Bloch/correlation-tensor decomposition,
// Schmidt canonical form of the correlation tensor and scalar measures.
//
// Conventions used throughout the library:
//   basis order |00>, |01>, |10>, |11>  (first factor = Alice = qubit A)
//   sigma_1 = X, sigma_2 = Y, sigma_3 = Z
//   logarithms are base 2

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace qcorr {

using Complex = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec4 = Eigen::Vector4d;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;

/// Base class of every state-validation failure.
class StateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotHermitianError : public StateError {
 public:
  using StateError::StateError;
};

class NotUnitTraceError : public StateError {
 public:
  using StateError::StateError;
};

/// Raised when a matrix (or a set of Bloch parameters) has an eigenvalue
/// below -kPsdTol.
class NotAStateError : public StateError {
 public:
  using StateError::StateError;
};

enum class Side { A, B };

/// Pauli matrix sigma_k, k in {1, 2, 3}.
const Mat2c& pauli(int k);

/// A validated two-qubit density matrix. Immutable after construction.
class TwoQubitState {
 public:
  /// Validates hermiticity, unit trace and positivity (in that order) and
  /// throws the matching StateError subclass.
  explicit TwoQubitState(const Mat4c& matrix);

  const Mat4c& matrix() const { return matrix_; }

  /// Eigenvalues in ascending order, tiny negatives clamped to zero and
  /// renormalized to unit sum.
  Vec4 spectrum() const;

 private:
  Mat4c matrix_;
};

/// Local Bloch vectors and correlation tensor E_kl = Tr((sigma_k x sigma_l) rho).
struct BlochRep {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  Mat3 E = Mat3::Zero();
};

/// E = rot_a^T diag(signs .* singular_values) rot_b with proper rotations
/// rot_a, rot_b and singular values sorted descending.
struct SchmidtForm {
  Vec3 singular_values = Vec3::Zero();
  Mat3 rot_a = Mat3::Identity();
  Mat3 rot_b = Mat3::Identity();
  Vec3 signs = Vec3::Ones();

  Mat3 diagonal() const { return signs.cwiseProduct(singular_values).asDiagonal(); }
};

BlochRep to_bloch(const TwoQubitState& rho);

/// Assembles 1/4 (1 + a.sigma x 1 + 1 x b.sigma + E_kl sigma_k x sigma_l)
/// without any validation. Used by reconstruction code that repairs
/// slightly unphysical estimates.
Mat4c bloch_matrix(const BlochRep& rep);

/// bloch_matrix followed by validation; throws NotAStateError when the
/// parameters do not describe a physical state.
TwoQubitState from_bloch(const BlochRep& rep);

SchmidtForm schmidt_canonical(const Mat3& E);

double purity(const TwoQubitState& rho);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double state_fidelity(const TwoQubitState& rho, const TwoQubitState& sigma);

/// Entropy in bits of a 2x2 or 4x4 density matrix.
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

Mat2c partial_trace(const TwoQubitState& rho, Side keep);

/// H(rho_A) + H(rho_B) - H(rho).
double mutual_information(const TwoQubitState& rho);

/// Wootters concurrence.
double concurrence(const TwoQubitState& rho);

// --- single-qubit helpers -------------------------------------------------

/// 1/2 (1 + r.sigma); no validation.
Mat2c qubit_from_bloch(const Vec3& r);
Vec3 qubit_bloch(const Mat2c& rho);

/// Throws StateError unless rho is a Hermitian, unit-trace, PSD 2x2 matrix.
void validate_qubit(const Mat2c& rho);

/// SU(2) element whose adjoint action on Bloch vectors is the rotation R.
Mat2c unitary_from_rotation(const Mat3& R);

/// (U_A x U_B) rho (U_A x U_B)^dagger.
TwoQubitState apply_local_unitary(const TwoQubitState& rho, const Mat2c& ua, const Mat2c& ub);

/// Local unitaries realizing Bloch-space rotations: a -> R_A a, b -> R_B b,
/// E -> R_A E R_B^T.
TwoQubitState apply_local_rotation(const TwoQubitState& rho, const Mat3& rot_a, const Mat3& rot_b);

Mat4c kron(const Mat2c& x, const Mat2c& y);

}  // namespace qcorr
