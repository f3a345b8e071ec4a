#pragma once

// Factories for the state families used by the toolkit.

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "qcorr/qstate.hpp"

namespace qcorr {

enum class BellKind { psi_plus, psi_minus, phi_plus, phi_minus };

/// Parses "psi_plus", "psi+", "phi_minus", ... Throws std::invalid_argument.
BellKind parse_bell_kind(std::string_view name);

/// |psi+-> = (|10> +- |01>)/sqrt2, |phi+-> = (|00> +- |11>)/sqrt2.
TwoQubitState bell(BellKind kind);

/// Computational basis projector |ij><ij|.
TwoQubitState basis_state(int i, int j);

TwoQubitState maximally_mixed();

/// rho_A (x) rho_B.
TwoQubitState product(const Mat2c& rho_a, const Mat2c& rho_b);

/// lambda |psi-><psi-| + (1 - lambda)/4 * 1. Requires lambda in [0, 1].
TwoQubitState werner(double lambda);

class InvalidWeightsError : public StateError {
 public:
  using StateError::StateError;
};

/// Weights of the rho_b mixture over {psi+, psi-, |11>, |00>}:
/// (1-k)/4, (1+3k)/4, (1-2t-k)/4, (1+2t-k)/4.
std::array<double, 4> rho_b_weights(double k, double t);

/// Mixture of two Bell states and two product states with a = b = t e_z
/// and E = -k 1. With sigma_3 |0> = +|0>, a = +t e_z puts the larger
/// product weight (1+2t-k)/4 on |00>. Weights down to -1e-12 are clamped to
/// zero; anything more negative raises InvalidWeightsError naming the
/// component.
TwoQubitState rho_b(double k, double t);

/// p Pi_{+v} (x) rho1 + (1-p) Pi_{-v} (x) rho2 with Pi_{+-v} the projectors
/// onto the +-v eigenstates of v.sigma on Alice's side.
TwoQubitState zero_discord(double p, const Vec3& v, const Mat2c& rho1, const Mat2c& rho2);

struct MixtureSpec {
  std::vector<std::pair<double, TwoQubitState>> components;
};

/// Convex combination with weights renormalized to unit sum. Rejects empty
/// specs and negative weights.
TwoQubitState mix(const MixtureSpec& spec);

/// The components (weight, state) that the named families are built from.
/// Werner: lambda psi- plus (1-lambda)/4 of each Bell state.
MixtureSpec werner_components(double lambda);
MixtureSpec rho_b_components(double k, double t);

/// Haar-rotated diagonal state with exactly `rank` nonzero eigenvalues drawn
/// uniformly from the simplex. Deterministic in seed.
TwoQubitState random_state(std::uint64_t seed, int rank);

/// Haar-random SO(3) rotation, deterministic in seed.
Mat3 random_rotation(std::uint64_t seed);

/// Uniformly distributed point of the Bloch ball.
Vec3 random_bloch_vector(std::uint64_t seed);

/// Random state with maximally mixed marginals (a = b = 0): a locally rotated
/// Bell-diagonal state with Dirichlet-distributed Bell weights.
TwoQubitState random_maximally_mixed_marginals(std::uint64_t seed);

/// Random state with isotropic correlations E = lambda R (R a rotation) and
/// arbitrary local vectors, drawn by rejection from the physical region.
TwoQubitState random_isotropic(std::uint64_t seed);

/// Random instance of zero_discord(p, v, rho1, rho2).
TwoQubitState random_zero_discord(std::uint64_t seed);

}  // namespace qcorr
