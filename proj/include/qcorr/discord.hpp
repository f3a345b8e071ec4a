#pragma once

// Geometric quantum discord with measurement on Alice's (first) qubit.

#include <cstdint>

#include "qcorr/qstate.hpp"

namespace qcorr {

struct DiscordReport {
  /// Normalized D^2 in [0, 1].
  double value = 0.0;
  /// Largest eigenvalue of K = a a^T + E E^T.
  double k_max = 0.0;
  bool special_class = false;
  /// Length of a inside the top eigenspace of E E^T; 0 outside the class.
  double kappa = 0.0;
};

struct SpecialClassCheck {
  bool member = false;
  double kappa = 0.0;
};

class NotInSpecialClassError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// D^2 = 1/2 (|a|^2 + |E|^2 - k_max).
DiscordReport geometric_discord(const TwoQubitState& rho);
DiscordReport geometric_discord(const BlochRep& rep);

/// Members: a = 0, isotropic E, or a inside the top eigenspace of E E^T
/// (angular tolerance 1e-6 rad). For those states D^2 = 1/2 (E2^2 + E3^2).
SpecialClassCheck check_special_class(const TwoQubitState& rho);
SpecialClassCheck check_special_class(const BlochRep& rep);

/// 1/2 (E2^2 + E3^2); throws NotInSpecialClassError outside the class.
double discord_special_form(const TwoQubitState& rho);

bool is_zero_discord(const TwoQubitState& rho, double tol);

struct DiscordOracleOptions {
  int restarts = 50;
  int evaluations_per_restart = 2000;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

/// Brute-force 2 min Tr(rho - chi)^2 over chi = p Pi_{+v} x rho1 +
/// (1-p) Pi_{-v} x rho2, minimized by Nelder-Mead from seeded random starts.
/// Independent of the closed form: works on the 4x4 matrices directly.
double geometric_discord_oracle(const TwoQubitState& rho, const DiscordOracleOptions& opt = {});

}  // namespace qcorr
