#include "qcorr/rsp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include <Eigen/Eigenvalues>

namespace qcorr {

namespace {

constexpr double kUnitTol = 1e-9;
constexpr double kBranchTol = 1e-12;

void require_unit(const Vec3& v, const char* what) {
  if (!v.allFinite() || std::abs(v.norm() - 1.0) > kUnitTol)
    throw std::invalid_argument(std::string(what) + " must be a unit vector");
}

void require_outcome(int outcome) {
  if (outcome != 1 && outcome != -1) throw std::invalid_argument("outcome must be +1 or -1");
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x45597u};
  return std::mt19937_64(seq);
}

}  // namespace

void ProtocolConfig::validate() const {
  require_unit(beta, "beta");
  require_unit(target, "target");
  if (std::abs(beta.dot(target)) > kUnitTol) throw std::invalid_argument("target must be orthogonal to beta");
  if (alpha_policy.fixed) require_unit(*alpha_policy.fixed, "alpha");
}

double outcome_probability(const BlochRep& rep, const Vec3& alpha_hat, int outcome) {
  require_outcome(outcome);
  return 0.5 * (1.0 + outcome * alpha_hat.dot(rep.a));
}

double outcome_probability(const TwoQubitState& rho, const Vec3& alpha_hat, int outcome) {
  return outcome_probability(to_bloch(rho), alpha_hat, outcome);
}

Vec3 bob_conditional_state(const BlochRep& rep, const Vec3& alpha_hat, int outcome) {
  const double p = outcome_probability(rep, alpha_hat, outcome);
  if (p <= kBranchTol) throw ZeroProbabilityBranchError("conditioning on an outcome of probability zero");
  return (rep.b + outcome * rep.E.transpose() * alpha_hat) / (1.0 + outcome * alpha_hat.dot(rep.a));
}

Vec3 bob_conditional_state(const TwoQubitState& rho, const Vec3& alpha_hat, int outcome) {
  return bob_conditional_state(to_bloch(rho), alpha_hat, outcome);
}

Vec3 apply_correction(const Vec3& v, const Vec3& beta) { return 2.0 * v.dot(beta) * beta - v; }

Vec3 ensemble_state(const BlochRep& rep, const Vec3& alpha_hat, const Vec3& beta) {
  Vec3 r = Vec3::Zero();
  const double p_plus = outcome_probability(rep, alpha_hat, 1);
  const double p_minus = outcome_probability(rep, alpha_hat, -1);
  if (p_plus > kBranchTol) r += p_plus * bob_conditional_state(rep, alpha_hat, 1);
  if (p_minus > kBranchTol) r += p_minus * apply_correction(bob_conditional_state(rep, alpha_hat, -1), beta);
  return r;
}

Vec3 ensemble_state(const TwoQubitState& rho, const Vec3& alpha_hat, const Vec3& beta) {
  return ensemble_state(to_bloch(rho), alpha_hat, beta);
}

double payoff(const Vec3& r, const Vec3& s) {
  const double overlap = r.dot(s);
  return overlap * overlap;
}

double payoff_given_alpha(const BlochRep& rep, const Vec3& alpha_hat, const Vec3& /*beta*/, const Vec3& s) {
  const double v = alpha_hat.dot(rep.E * s);
  return v * v;
}

double payoff_given_alpha(const TwoQubitState& rho, const Vec3& alpha_hat, const Vec3& beta, const Vec3& s) {
  return payoff_given_alpha(to_bloch(rho), alpha_hat, beta, s);
}

Vec3 optimal_alpha(const BlochRep& rep, const Vec3& /*beta*/, const Vec3& s) {
  const Vec3 e = rep.E * s;
  const double n = e.norm();
  if (n <= kBranchTol) return Vec3::UnitX();
  return e / n;
}

Vec3 optimal_alpha(const TwoQubitState& rho, const Vec3& beta, const Vec3& s) {
  return optimal_alpha(to_bloch(rho), beta, s);
}

double optimal_payoff(const BlochRep& rep, const Vec3& s) { return (rep.E * s).squaredNorm(); }

double average_payoff(const BlochRep& rep, const Vec3& beta) {
  return std::max(0.5 * (rep.E.squaredNorm() - (rep.E * beta).squaredNorm()), 0.0);
}

double average_payoff(const TwoQubitState& rho, const Vec3& beta) { return average_payoff(to_bloch(rho), beta); }

double rsp_fidelity(const BlochRep& rep) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(rep.E.transpose() * rep.E, Eigen::EigenvaluesOnly);
  const Vec3 ev = es.eigenvalues().cwiseMax(0.0);
  return 0.5 * (ev(0) + ev(1));
}

double rsp_fidelity(const TwoQubitState& rho) { return rsp_fidelity(to_bloch(rho)); }

Vec3 worst_beta(const BlochRep& rep) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(rep.E.transpose() * rep.E);
  return es.eigenvectors().col(2).normalized();
}

Vec3 worst_beta(const TwoQubitState& rho) { return worst_beta(to_bloch(rho)); }

double rsp_fidelity_oracle(const TwoQubitState& rho, int grid_points) {
  if (grid_points < 100) throw std::invalid_argument("rsp_fidelity_oracle: need at least 100 grid points");
  const BlochRep rep = to_bloch(rho);
  double best = std::numeric_limits<double>::infinity();
  for (const Vec3& beta : fibonacci_sphere(grid_points)) best = std::min(best, average_payoff(rep, beta));
  return best;
}

std::vector<Vec3> fibonacci_sphere(int n) {
  if (n < 1) throw std::invalid_argument("fibonacci_sphere: n must be >= 1");
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * i;
    pts.emplace_back(Vec3(rho * std::cos(phi), rho * std::sin(phi), z).normalized());
  }
  return pts;
}

Vec3 beta_for_target(const Vec3& s) {
  const Vec3 c = Vec3::UnitZ().cross(s);
  if (c.norm() < 1e-9) return Vec3::UnitX();
  return c.normalized();
}

RspRound run_round(const BlochRep& rep, const ProtocolConfig& config, int outcome) {
  config.validate();
  RspRound round;
  round.alpha_hat = config.alpha_policy.fixed ? *config.alpha_policy.fixed
                                              : optimal_alpha(rep, config.beta, config.target);
  round.outcome = outcome;
  round.bob_conditional = bob_conditional_state(rep, round.alpha_hat, outcome);
  round.corrected = outcome == 1 ? round.bob_conditional : apply_correction(round.bob_conditional, config.beta);
  return round;
}

SweepRecord simulate(const TwoQubitState& rho, const ProtocolConfig& config, std::uint64_t shots,
                     std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("simulate: shots must be >= 1");
  config.validate();
  const BlochRep rep = to_bloch(rho);
  const Vec3& s = config.target;
  const Vec3 alpha = config.alpha_policy.fixed ? *config.alpha_policy.fixed : optimal_alpha(rep, config.beta, s);

  const double p_plus = std::clamp(outcome_probability(rep, alpha, 1), 0.0, 1.0);
  const double p_minus = 1.0 - p_plus;
  // Projections of the corrected branch vectors onto the target.
  const double x = p_plus > kBranchTol ? bob_conditional_state(rep, alpha, 1).dot(s) : 0.0;
  const double y =
      p_minus > kBranchTol ? apply_correction(bob_conditional_state(rep, alpha, -1), config.beta).dot(s) : 0.0;

  auto rng = stream_rng(seed, 0);
  std::binomial_distribution<std::uint64_t> binom(shots, p_plus);
  const std::uint64_t n_plus = binom(rng);
  const double q = static_cast<double>(n_plus) / static_cast<double>(shots);
  const double overlap = q * x + (1.0 - q) * y;

  SweepRecord rec;
  rec.target = s;
  rec.beta = config.beta;
  rec.payoff_analytic = payoff_given_alpha(rep, alpha, config.beta, s);
  rec.payoff_mc = overlap * overlap;
  rec.stderr_mc = std::abs(2.0 * overlap * (x - y)) * std::sqrt(q * (1.0 - q) / static_cast<double>(shots));
  rec.shots = shots;
  return rec;
}

SweepResult sweep(const TwoQubitState& rho, const std::vector<Vec3>& targets, std::uint64_t shots,
                  std::uint64_t seed) {
  SweepResult out;
  out.records.reserve(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    ProtocolConfig cfg;
    cfg.target = targets[i].normalized();
    cfg.beta = beta_for_target(cfg.target);
    // Each target gets its own deterministic stream derived from (seed, i).
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), 0x5a7e9u};
    std::uint64_t target_seed = 0;
    {
      std::mt19937_64 g(seq);
      target_seed = g();
    }
    SweepRecord rec = simulate(rho, cfg, shots, target_seed);
    rec.target_index = i;
    out.records.push_back(rec);
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  const auto old_precision = os.precision(17);
  os << "target_index,sx,sy,sz,beta_x,beta_y,beta_z,payoff_analytic,payoff_mc,stderr,shots\n";
  for (const auto& r : result.records) {
    os << r.target_index << ',' << r.target(0) << ',' << r.target(1) << ',' << r.target(2) << ',' << r.beta(0)
       << ',' << r.beta(1) << ',' << r.beta(2) << ',' << r.payoff_analytic << ',' << r.payoff_mc << ','
       << r.stderr_mc << ',' << r.shots << '\n';
  }
  os.precision(old_precision);
}

}  // namespace qcorr
