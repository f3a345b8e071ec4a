#include "qcorr/states.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

namespace qcorr {

namespace {

Mat4c projector(const Eigen::Vector4cd& psi) { return psi * psi.adjoint(); }

double hermitian_min_eigenvalue(const Mat4c& m) {
  Eigen::SelfAdjointEigenSolver<Mat4c> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

const std::array<const char*, 4> kRhoBComponentNames = {"psi_plus", "psi_minus", "|11>", "|00>"};

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

}  // namespace

BellKind parse_bell_kind(std::string_view name) {
  if (name == "psi_plus" || name == "psi+") return BellKind::psi_plus;
  if (name == "psi_minus" || name == "psi-") return BellKind::psi_minus;
  if (name == "phi_plus" || name == "phi+") return BellKind::phi_plus;
  if (name == "phi_minus" || name == "phi-") return BellKind::phi_minus;
  throw std::invalid_argument("unknown Bell state '" + std::string(name) + "'");
}

TwoQubitState bell(BellKind kind) {
  const double h = 1.0 / std::numbers::sqrt2;
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  switch (kind) {
    case BellKind::psi_plus:
      psi(2) = h;
      psi(1) = h;
      break;
    case BellKind::psi_minus:
      psi(2) = h;
      psi(1) = -h;
      break;
    case BellKind::phi_plus:
      psi(0) = h;
      psi(3) = h;
      break;
    case BellKind::phi_minus:
      psi(0) = h;
      psi(3) = -h;
      break;
  }
  return TwoQubitState(projector(psi));
}

TwoQubitState basis_state(int i, int j) {
  if (i < 0 || i > 1 || j < 0 || j > 1) throw std::invalid_argument("basis labels must be 0 or 1");
  Mat4c m = Mat4c::Zero();
  m(2 * i + j, 2 * i + j) = 1.0;
  return TwoQubitState(m);
}

TwoQubitState maximally_mixed() { return TwoQubitState(0.25 * Mat4c::Identity()); }

TwoQubitState product(const Mat2c& rho_a, const Mat2c& rho_b) {
  validate_qubit(rho_a);
  validate_qubit(rho_b);
  return TwoQubitState(kron(rho_a, rho_b));
}

TwoQubitState werner(double lambda) { return mix(werner_components(lambda)); }

MixtureSpec werner_components(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("werner: lambda must lie in [0, 1]");
  const double noise = (1.0 - lambda) / 4.0;
  return MixtureSpec{{{lambda + noise, bell(BellKind::psi_minus)},
                      {noise, bell(BellKind::psi_plus)},
                      {noise, bell(BellKind::phi_plus)},
                      {noise, bell(BellKind::phi_minus)}}};
}

std::array<double, 4> rho_b_weights(double k, double t) {
  return {(1.0 - k) / 4.0, (1.0 + 3.0 * k) / 4.0, (1.0 - 2.0 * t - k) / 4.0, (1.0 + 2.0 * t - k) / 4.0};
}

MixtureSpec rho_b_components(double k, double t) {
  if (!std::isfinite(k) || !std::isfinite(t)) throw InvalidWeightsError("rho_b: k and t must be finite");
  auto w = rho_b_weights(k, t);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < -1e-12)
      throw InvalidWeightsError(std::string("rho_b: negative weight for component ") + kRhoBComponentNames[i]);
    w[i] = std::max(w[i], 0.0);
  }
  return MixtureSpec{{{w[0], bell(BellKind::psi_plus)},
                      {w[1], bell(BellKind::psi_minus)},
                      {w[2], basis_state(1, 1)},
                      {w[3], basis_state(0, 0)}}};
}

TwoQubitState rho_b(double k, double t) { return mix(rho_b_components(k, t)); }

TwoQubitState zero_discord(double p, const Vec3& v, const Mat2c& rho1, const Mat2c& rho2) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("zero_discord: p must lie in [0, 1]");
  if (std::abs(v.norm() - 1.0) > 1e-9) throw std::invalid_argument("zero_discord: v must be a unit vector");
  validate_qubit(rho1);
  validate_qubit(rho2);
  const Mat4c m = p * kron(qubit_from_bloch(v), rho1) + (1.0 - p) * kron(qubit_from_bloch(-v), rho2);
  return TwoQubitState(m);
}

TwoQubitState mix(const MixtureSpec& spec) {
  if (spec.components.empty()) throw std::invalid_argument("mix: empty mixture");
  double total = 0.0;
  for (const auto& [w, _] : spec.components) {
    if (!(w >= 0.0)) throw std::invalid_argument("mix: weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("mix: weights sum to zero");
  Mat4c m = Mat4c::Zero();
  for (const auto& [w, state] : spec.components) m += (w / total) * state.matrix();
  return TwoQubitState(m);
}

TwoQubitState random_state(std::uint64_t seed, int rank) {
  if (rank < 1 || rank > 4) throw std::invalid_argument("random_state: rank must be in 1..4");
  auto rng = make_rng(seed, 1);
  std::normal_distribution<double> normal;
  std::exponential_distribution<double> expo(1.0);

  // Haar unitary from the QR decomposition of a Ginibre matrix, with the
  // phases of R's diagonal moved into Q.
  Mat4c g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = Complex{normal(rng), normal(rng)};
  Eigen::HouseholderQR<Mat4c> qr(g);
  Mat4c q = qr.householderQ();
  const Mat4c r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 4; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }

  Vec4 spec = Vec4::Zero();
  for (int i = 0; i < rank; ++i) spec(i) = expo(rng);
  spec /= spec.sum();

  Mat4c m = q * spec.cast<Complex>().asDiagonal() * q.adjoint();
  return TwoQubitState(0.5 * (m + m.adjoint()));
}

Mat3 random_rotation(std::uint64_t seed) {
  auto rng = make_rng(seed, 2);
  std::normal_distribution<double> normal;
  Mat3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Mat3> qr(g);
  Mat3 q = qr.householderQ();
  const Mat3 r = qr.matrixQR();
  for (int j = 0; j < 3; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

Vec3 random_bloch_vector(std::uint64_t seed) {
  auto rng = make_rng(seed, 3);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec3 dir(normal(rng), normal(rng), normal(rng));
  dir.normalize();
  return std::cbrt(unif(rng)) * dir;
}

TwoQubitState random_maximally_mixed_marginals(std::uint64_t seed) {
  auto rng = make_rng(seed, 4);
  std::exponential_distribution<double> expo(1.0);
  const std::array<BellKind, 4> kinds = {BellKind::psi_plus, BellKind::psi_minus, BellKind::phi_plus,
                                         BellKind::phi_minus};
  MixtureSpec spec;
  for (auto kind : kinds) spec.components.emplace_back(expo(rng), bell(kind));
  const TwoQubitState diag = mix(spec);
  return apply_local_rotation(diag, random_rotation(rng()), random_rotation(rng()));
}

TwoQubitState random_isotropic(std::uint64_t seed) {
  auto rng = make_rng(seed, 5);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (;;) {
    BlochRep rep;
    rep.E = unif(rng) * random_rotation(rng());
    rep.a = random_bloch_vector(rng());
    rep.b = random_bloch_vector(rng());
    if (hermitian_min_eigenvalue(bloch_matrix(rep)) >= 0.0) return from_bloch(rep);
  }
}

TwoQubitState random_zero_discord(std::uint64_t seed) {
  auto rng = make_rng(seed, 6);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double p = unif(rng);
  Vec3 v = random_bloch_vector(rng());
  while (v.norm() < 1e-6) v = random_bloch_vector(rng());
  v.normalize();
  return zero_discord(p, v, qubit_from_bloch(random_bloch_vector(rng())),
                      qubit_from_bloch(random_bloch_vector(rng())));
}

}  // namespace qcorr
