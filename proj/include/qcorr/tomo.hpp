#pragma once

// Simulated two-qubit Pauli tomography: outcome laws for the nine joint
// settings, Poisson count sampling, linear-inversion reconstruction and
// duration-weighted mixture assembly.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qcorr/qstate.hpp"

namespace qcorr {

/// Counts for one joint setting (sigma_k on A, sigma_l on B), k, l in 1..3.
/// Outcome order: (+,+), (+,-), (-,+), (-,-); the first sign is Alice's.
struct CountRecord {
  int k = 1;
  int l = 1;
  std::array<std::uint64_t, 4> counts{};

  std::uint64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
};

using OutcomeProbabilities = std::array<double, 4>;

class MissingSettingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyCountsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 1/4 (1 + s_A a_k + s_B b_l + s_A s_B E_kl), clamped at zero.
OutcomeProbabilities measurement_probabilities(const TwoQubitState& rho, int k, int l);

/// Independent Poisson draws with means mean_total * probs[i].
CountRecord sample_counts(int k, int l, const OutcomeProbabilities& probs, double mean_total, std::uint64_t seed);

/// All nine settings of `rho`, each with `mean_total` expected counts.
std::vector<CountRecord> measure_state(const TwoQubitState& rho, double mean_total, std::uint64_t seed);

struct Reconstruction {
  TwoQubitState state;
  /// True when the linear estimate had negative eigenvalues that were clipped.
  bool psd_repaired = false;
  /// Smallest eigenvalue of the raw linear estimate.
  double raw_min_eigenvalue = 0.0;
};

/// Linear inversion from the nine joint settings. The marginal a_k (b_l) is
/// averaged over the three settings sharing Alice's (Bob's) axis. A non-PSD
/// estimate is repaired by clipping negative eigenvalues and renormalizing.
Reconstruction linear_inversion(const std::vector<CountRecord>& records);

/// Counts from a mixture assembled by measurement time: for each setting,
/// component i contributes Poisson counts with means
/// mean_rate * w_i / sum(w) * p_i(outcome).
std::vector<CountRecord> mixture_by_duration(const std::vector<std::pair<TwoQubitState, double>>& components,
                                             double mean_rate, std::uint64_t seed);

/// Rotation of Bob's qubit by `angle` about `axis`: b -> R b, E -> E R^T.
TwoQubitState perturb_local_rotation(const TwoQubitState& rho, const Vec3& axis, double angle);

/// CSV with header k,l,n_pp,n_pm,n_mp,n_mm.
void write_counts_csv(std::ostream& os, const std::vector<CountRecord>& records);
std::vector<CountRecord> read_counts_csv(std::istream& is);

}  // namespace qcorr
