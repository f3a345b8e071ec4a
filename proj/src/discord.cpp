#include "qcorr/discord.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "qcorr/minimize.hpp"

namespace qcorr {

namespace {

constexpr double kDegenerateTol = 1e-9;
constexpr double kParallelTol = 1e-6;
constexpr double kZeroVectorTol = 1e-12;

Vec3 unit_from_angles(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

// Maps 9 unconstrained reals onto the classical-quantum family. Every
// coordinate enters through a periodic function so no bounds are needed.
Mat4c classical_state(const std::vector<double>& x) {
  const double p = std::pow(std::sin(x[0]), 2);
  const Vec3 v = unit_from_angles(x[1], x[2]);
  const Vec3 r1 = std::pow(std::sin(x[3]), 2) * unit_from_angles(x[4], x[5]);
  const Vec3 r2 = std::pow(std::sin(x[6]), 2) * unit_from_angles(x[7], x[8]);
  return p * kron(qubit_from_bloch(v), qubit_from_bloch(r1)) +
         (1.0 - p) * kron(qubit_from_bloch(-v), qubit_from_bloch(r2));
}

}  // namespace

DiscordReport geometric_discord(const BlochRep& rep) {
  const Mat3 K = rep.a * rep.a.transpose() + rep.E * rep.E.transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> es(K, Eigen::EigenvaluesOnly);
  DiscordReport out;
  out.k_max = es.eigenvalues()(2);
  const double d2 = 0.5 * (rep.a.squaredNorm() + rep.E.squaredNorm() - out.k_max);
  out.value = std::max(d2, 0.0);
  const auto cls = check_special_class(rep);
  out.special_class = cls.member;
  out.kappa = cls.kappa;
  return out;
}

DiscordReport geometric_discord(const TwoQubitState& rho) { return geometric_discord(to_bloch(rho)); }

SpecialClassCheck check_special_class(const BlochRep& rep) {
  const double a_norm = rep.a.norm();
  if (a_norm <= kZeroVectorTol) return {true, 0.0};

  Eigen::SelfAdjointEigenSolver<Mat3> es(rep.E * rep.E.transpose());
  const Vec3 sv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  // Projector onto the (possibly degenerate) top eigenspace of E E^T.
  Mat3 proj = Mat3::Zero();
  for (int i = 0; i < 3; ++i)
    if (sv(i) >= sv(2) - kDegenerateTol) proj += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();

  const Vec3 along = proj * rep.a;
  const double angle = std::atan2((rep.a - along).norm(), along.norm());
  if (angle <= kParallelTol) return {true, along.norm()};
  return {false, 0.0};
}

SpecialClassCheck check_special_class(const TwoQubitState& rho) { return check_special_class(to_bloch(rho)); }

double discord_special_form(const TwoQubitState& rho) {
  const BlochRep rep = to_bloch(rho);
  if (!check_special_class(rep).member)
    throw NotInSpecialClassError("state is outside the class where D^2 = (E2^2 + E3^2)/2");
  const Vec3 sv = schmidt_canonical(rep.E).singular_values;
  return 0.5 * (sv(1) * sv(1) + sv(2) * sv(2));
}

bool is_zero_discord(const TwoQubitState& rho, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("is_zero_discord: tol must be positive");
  return geometric_discord(rho).value <= tol;
}

double geometric_discord_oracle(const TwoQubitState& rho, const DiscordOracleOptions& opt) {
  if (opt.restarts < 1) throw std::invalid_argument("geometric_discord_oracle: restarts must be >= 1");
  const Mat4c target = rho.matrix();
  const Objective objective = [&target](const std::vector<double>& x) {
    return 2.0 * (target - classical_state(x)).cwiseAbs2().sum();
  };

  SimplexOptions sopt;
  sopt.max_evaluations = opt.evaluations_per_restart;
  sopt.value_tol = opt.tol * 1e-3;

  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < opt.restarts; ++r) {
    // Independent stream per restart so the result does not depend on order.
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(r), 0x5eedu};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> x0(9);
    for (auto& xi : x0) xi = angle(rng);
    best = std::min(best, nelder_mead(objective, x0, sopt).value);
  }
  return best;
}

}  // namespace qcorr
