#pragma once

// Remote state preparation of equatorial qubit states.
//
// Alice measures her qubit along alpha_hat, sends the outcome (+-1) to Bob,
// who applies a pi rotation about the announced axis beta when the outcome
// is -1. The target s lies in the plane orthogonal to beta; the payoff of a
// run is (r . s)^2 for Bob's resulting Bloch vector r.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qcorr/qstate.hpp"

namespace qcorr {

class ZeroProbabilityBranchError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Alice's measurement direction: the payoff-maximizing one, or fixed.
struct AlphaPolicy {
  std::optional<Vec3> fixed;
  static AlphaPolicy optimal() { return {}; }
  static AlphaPolicy fixed_direction(const Vec3& v) { return {v}; }
};

struct ProtocolConfig {
  Vec3 beta = Vec3::UnitZ();
  Vec3 target = Vec3::UnitX();
  AlphaPolicy alpha_policy;

  /// Throws std::invalid_argument unless beta, target (and a fixed alpha)
  /// are unit vectors and target is orthogonal to beta.
  void validate() const;
};

struct RspRound {
  Vec3 alpha_hat;
  int outcome = 1;
  Vec3 bob_conditional;
  Vec3 corrected;
};

struct SweepRecord {
  std::size_t target_index = 0;
  Vec3 target;
  Vec3 beta;
  double payoff_analytic = 0.0;
  double payoff_mc = 0.0;
  double stderr_mc = 0.0;
  std::uint64_t shots = 0;
};

struct SweepResult {
  std::vector<SweepRecord> records;
};

/// P(outcome) = 1/2 (1 + outcome * alpha_hat . a).
double outcome_probability(const BlochRep& rep, const Vec3& alpha_hat, int outcome);
double outcome_probability(const TwoQubitState& rho, const Vec3& alpha_hat, int outcome);

/// b_alpha = (b + outcome E^T alpha_hat) / (1 + outcome alpha_hat . a).
Vec3 bob_conditional_state(const BlochRep& rep, const Vec3& alpha_hat, int outcome);
Vec3 bob_conditional_state(const TwoQubitState& rho, const Vec3& alpha_hat, int outcome);

/// pi rotation about beta: 2 (v . beta) beta - v.
Vec3 apply_correction(const Vec3& v, const Vec3& beta);

/// r = P(+1) b_+ + P(-1) R_pi b_-, built from the two conditional branches.
Vec3 ensemble_state(const BlochRep& rep, const Vec3& alpha_hat, const Vec3& beta);
Vec3 ensemble_state(const TwoQubitState& rho, const Vec3& alpha_hat, const Vec3& beta);

double payoff(const Vec3& r, const Vec3& s);

/// (alpha_hat . E s)^2.
double payoff_given_alpha(const BlochRep& rep, const Vec3& alpha_hat, const Vec3& beta, const Vec3& s);
double payoff_given_alpha(const TwoQubitState& rho, const Vec3& alpha_hat, const Vec3& beta, const Vec3& s);

/// E s / |E s|, or e_x when |E s| <= 1e-12. The optimal payoff is |E s|^2.
Vec3 optimal_alpha(const BlochRep& rep, const Vec3& beta, const Vec3& s);
Vec3 optimal_alpha(const TwoQubitState& rho, const Vec3& beta, const Vec3& s);
double optimal_payoff(const BlochRep& rep, const Vec3& s);

/// Mean optimal payoff over targets on the circle orthogonal to beta:
/// 1/2 (|E|^2 - |E beta|^2).
double average_payoff(const BlochRep& rep, const Vec3& beta);
double average_payoff(const TwoQubitState& rho, const Vec3& beta);

/// min over beta of average_payoff = 1/2 (E2^2 + E3^2).
double rsp_fidelity(const BlochRep& rep);
double rsp_fidelity(const TwoQubitState& rho);

/// Top eigenvector of E^T E (the minimizing announced axis).
Vec3 worst_beta(const BlochRep& rep);
Vec3 worst_beta(const TwoQubitState& rho);

/// Minimum of average_payoff over a Fibonacci grid of beta directions.
double rsp_fidelity_oracle(const TwoQubitState& rho, int grid_points);

/// Golden-angle spiral of n unit vectors.
std::vector<Vec3> fibonacci_sphere(int n);

/// normalize(e_z x s), or e_x when s is (anti)parallel to e_z.
Vec3 beta_for_target(const Vec3& s);

/// Single protocol run with a prescribed outcome.
RspRound run_round(const BlochRep& rep, const ProtocolConfig& config, int outcome);

/// Samples `shots` outcomes and estimates r from the empirical outcome
/// frequencies and the exact conditional Bloch vectors. The standard error
/// propagates the binomial variance of n_+/N through the payoff.
SweepRecord simulate(const TwoQubitState& rho, const ProtocolConfig& config, std::uint64_t shots,
                     std::uint64_t seed);

/// Per-target simulation with beta from beta_for_target and optimal alpha.
/// Target i uses a seed stream derived from (seed, i).
SweepResult sweep(const TwoQubitState& rho, const std::vector<Vec3>& targets, std::uint64_t shots,
                  std::uint64_t seed);

/// CSV with header target_index,sx,sy,sz,beta_x,beta_y,beta_z,
/// payoff_analytic,payoff_mc,stderr,shots.
void write_sweep_csv(std::ostream& os, const SweepResult& result);

}  // namespace qcorr
