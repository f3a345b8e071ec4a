#include "qcorr/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/Geometry>
#include <Eigen/SVD>

namespace qcorr {

namespace {

const std::array<Mat2c, 4> kPauli = [] {
  const Complex i{0.0, 1.0};
  std::array<Mat2c, 4> p;
  p[0] << 1, 0, 0, 1;
  p[1] << 0, 1, 1, 0;
  p[2] << 0, -i, i, 0;
  p[3] << 1, 0, 0, -1;
  return p;
}();

template <typename M>
Eigen::VectorXd hermitian_eigenvalues(const M& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Spectrum with values in [-kPsdTol, 0) set to zero and renormalized.
Eigen::VectorXd clamped_spectrum(const Eigen::MatrixXcd& rho) {
  Eigen::VectorXd ev = hermitian_eigenvalues(rho);
  for (auto& v : ev) v = std::max(v, 0.0);
  const double sum = ev.sum();
  if (sum > 0) ev /= sum;
  return ev;
}

// Eigenvalues below kRoundoffFloor (relative to the largest) are treated as
// exact zeros; otherwise their square roots inject ~1e-8 noise.
constexpr double kRoundoffFloor = 1e-14;

Eigen::MatrixXcd sqrt_psd(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const double floor = kRoundoffFloor * std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  Eigen::VectorXd ev = es.eigenvalues();
  for (auto& v : ev) v = v > floor ? std::sqrt(v) : 0.0;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

std::string describe(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

}  // namespace

const Mat2c& pauli(int k) {
  if (k < 0 || k > 3) throw std::out_of_range("pauli index must be in 0..3");
  return kPauli[static_cast<std::size_t>(k)];
}

Mat4c kron(const Mat2c& x, const Mat2c& y) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = x(i, j) * y;
  return out;
}

TwoQubitState::TwoQubitState(const Mat4c& matrix) : matrix_(matrix) {
  if (!matrix.allFinite()) throw NotHermitianError("density matrix has non-finite entries");
  const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTol)
    throw NotHermitianError("density matrix is not Hermitian (deviation " + describe(asym) + ")");
  const Complex tr = matrix.trace();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw NotUnitTraceError("density matrix trace is " + describe(tr.real()) + ", expected 1");
  const Mat4c herm = 0.5 * (matrix + matrix.adjoint());
  const double min_ev = hermitian_eigenvalues(herm).minCoeff();
  if (min_ev < -kPsdTol)
    throw NotAStateError("density matrix has negative eigenvalue " + describe(min_ev));
}

Vec4 TwoQubitState::spectrum() const { return clamped_spectrum(matrix_); }

BlochRep to_bloch(const TwoQubitState& rho) {
  const Mat4c& m = rho.matrix();
  BlochRep rep;
  for (int k = 1; k <= 3; ++k) {
    rep.a(k - 1) = (kron(kPauli[k], kPauli[0]) * m).trace().real();
    rep.b(k - 1) = (kron(kPauli[0], kPauli[k]) * m).trace().real();
    for (int l = 1; l <= 3; ++l) rep.E(k - 1, l - 1) = (kron(kPauli[k], kPauli[l]) * m).trace().real();
  }
  return rep;
}

Mat4c bloch_matrix(const BlochRep& rep) {
  Mat4c m = Mat4c::Identity();
  for (int k = 1; k <= 3; ++k) {
    m += rep.a(k - 1) * kron(kPauli[k], kPauli[0]);
    m += rep.b(k - 1) * kron(kPauli[0], kPauli[k]);
    for (int l = 1; l <= 3; ++l) m += rep.E(k - 1, l - 1) * kron(kPauli[k], kPauli[l]);
  }
  return 0.25 * m;
}

TwoQubitState from_bloch(const BlochRep& rep) {
  if (!rep.a.allFinite() || !rep.b.allFinite() || !rep.E.allFinite())
    throw StateError("Bloch parameters must be finite");
  const Mat4c m = bloch_matrix(rep);
  const double min_ev = hermitian_eigenvalues(m).minCoeff();
  if (min_ev < -kPsdTol)
    throw NotAStateError("Bloch parameters do not describe a state (eigenvalue " + describe(min_ev) + ")");
  return TwoQubitState(m);
}

SchmidtForm schmidt_canonical(const Mat3& E) {
  Eigen::JacobiSVD<Mat3> svd(E, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 u = svd.matrixU();
  Mat3 v = svd.matrixV();
  SchmidtForm f;
  f.singular_values = svd.singularValues();
  // Fold reflections into the sign of the smallest singular value.
  if (u.determinant() < 0) {
    u.col(2) *= -1.0;
    f.signs(2) *= -1.0;
  }
  if (v.determinant() < 0) {
    v.col(2) *= -1.0;
    f.signs(2) *= -1.0;
  }
  f.rot_a = u.transpose();
  f.rot_b = v.transpose();
  return f;
}

double purity(const TwoQubitState& rho) { return (rho.matrix() * rho.matrix()).trace().real(); }

double state_fidelity(const TwoQubitState& rho, const TwoQubitState& sigma) {
  // Nuclear norm of sqrt(rho) sqrt(sigma); stable when either state is pure.
  const Eigen::MatrixXcd prod = sqrt_psd(rho.matrix()) * sqrt_psd(sigma.matrix());
  const double root_sum = Eigen::JacobiSVD<Eigen::MatrixXcd>(prod).singularValues().sum();
  return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols() || (rho.rows() != 2 && rho.rows() != 4))
    throw std::invalid_argument("entropy expects a 2x2 or 4x4 density matrix");
  double h = 0.0;
  for (double p : clamped_spectrum(rho))
    if (p > 0) h -= p * std::log2(p);
  return std::max(h, 0.0);
}

Mat2c partial_trace(const TwoQubitState& rho, Side keep) {
  const Mat4c& m = rho.matrix();
  Mat2c out = Mat2c::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        if (keep == Side::A)
          out(i, j) += m(2 * i + k, 2 * j + k);
        else
          out(i, j) += m(2 * k + i, 2 * k + j);
      }
  return out;
}

double mutual_information(const TwoQubitState& rho) {
  const double mi = von_neumann_entropy(partial_trace(rho, Side::A)) +
                    von_neumann_entropy(partial_trace(rho, Side::B)) - von_neumann_entropy(rho.matrix());
  return std::max(mi, 0.0);
}

double concurrence(const TwoQubitState& rho) {
  // The square roots of the eigenvalues of rho * flipped(rho) are the
  // singular values of sqrt(rho) sqrt(flipped(rho)); taking singular values
  // avoids square-rooting eigenvalues that are pure roundoff.
  const Mat4c yy = kron(kPauli[2], kPauli[2]);
  const Mat4c s = sqrt_psd(rho.matrix());
  const Mat4c s_flipped = yy * s.conjugate() * yy;
  Eigen::JacobiSVD<Mat4c> svd(s * s_flipped);
  Vec4 mu = svd.singularValues();
  std::sort(mu.begin(), mu.end(), std::greater<>());
  return std::clamp(mu(0) - mu(1) - mu(2) - mu(3), 0.0, 1.0);
}

Mat2c qubit_from_bloch(const Vec3& r) {
  Mat2c m = kPauli[0];
  for (int k = 1; k <= 3; ++k) m += r(k - 1) * kPauli[k];
  return 0.5 * m;
}

Vec3 qubit_bloch(const Mat2c& rho) {
  Vec3 r;
  for (int k = 1; k <= 3; ++k) r(k - 1) = (kPauli[k] * rho).trace().real();
  return r;
}

void validate_qubit(const Mat2c& rho) {
  if (!rho.allFinite()) throw NotHermitianError("qubit state has non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw NotHermitianError("qubit state is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > kTraceTol) throw NotUnitTraceError("qubit state trace differs from 1");
  if (hermitian_eigenvalues(rho).minCoeff() < -kPsdTol)
    throw NotAStateError("qubit state has a negative eigenvalue");
}

Mat2c unitary_from_rotation(const Mat3& R) {
  const Eigen::AngleAxisd aa(R);
  const Vec3 n = aa.axis();
  const double half = 0.5 * aa.angle();
  Mat2c ndots = n(0) * kPauli[1] + n(1) * kPauli[2] + n(2) * kPauli[3];
  return std::cos(half) * kPauli[0] - Complex{0.0, std::sin(half)} * ndots;
}

TwoQubitState apply_local_unitary(const TwoQubitState& rho, const Mat2c& ua, const Mat2c& ub) {
  const Mat4c u = kron(ua, ub);
  Mat4c out = u * rho.matrix() * u.adjoint();
  return TwoQubitState(0.5 * (out + out.adjoint()));
}

TwoQubitState apply_local_rotation(const TwoQubitState& rho, const Mat3& rot_a, const Mat3& rot_b) {
  return apply_local_unitary(rho, unitary_from_rotation(rot_a), unitary_from_rotation(rot_b));
}

}  // namespace qcorr
