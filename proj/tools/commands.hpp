#pragma once

// Command implementations behind the `qcorr` executable. Kept in a library
// so the acceptance suite exercises the same code paths as the CLI.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/qstate.hpp"
#include "qcorr/rsp.hpp"
#include "qcorr/states.hpp"

namespace qcorr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;

/// Raised for malformed state or noise specifications (exit code 1).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct StateParams {
  double lambda = 1.0 / 3.0;
  double k = 0.2;
  double t = 0.4;
};

/// A named resource: the ideal state plus the components it is physically
/// assembled from (used for duration-weighted count simulation).
struct Resource {
  std::string label;
  TwoQubitState ideal;
  MixtureSpec components;
};

/// --state grammar: werner | rho_b | bell:<kind> | maximally-mixed | file:<path>
Resource resolve_state(const std::string& spec, const StateParams& params);

struct NoiseSpec {
  double mean_total = 0.0;
  std::optional<Vec3> rot_axis;
  double rot_angle = 0.0;
};

/// poisson:<mean_total>[,rot:<x|y|z>:<angle>]
NoiseSpec parse_noise(const std::string& spec);

struct NoisyResource {
  TwoQubitState state;
  bool psd_repaired = false;
};

/// Duration-weighted Poisson counts of the components (each optionally
/// rotated on Bob's side), then linear-inversion reconstruction.
NoisyResource apply_noise(const Resource& resource, const NoiseSpec& noise, std::uint64_t seed);

struct Characterization {
  double state_fidelity = 1.0;
  double purity = 0.0;
  double concurrence = 0.0;
  double geometric_discord = 0.0;
  double rsp_fidelity = 0.0;
};

/// The five table rows; state_fidelity compares `state` with `ideal`.
Characterization characterize(const TwoQubitState& state, const TwoQubitState& ideal);

struct CharacterizeOptions {
  std::string state = "werner";
  std::optional<std::string> state2;
  StateParams params;
  std::optional<std::string> noise;
  std::uint64_t seed = 1;
  std::string format = "text";
  std::optional<std::filesystem::path> out;
};

struct SweepOptions {
  std::string state = "werner";
  std::optional<std::string> state2;
  StateParams params;
  int targets = 58;
  std::uint64_t shots = 100000;
  std::uint64_t seed = 1;
  std::optional<std::string> noise;
  std::string format = "text";
  std::optional<std::filesystem::path> out;
};

struct SweepComparison {
  SweepResult first;
  std::optional<SweepResult> second;
  /// Per-target payoff_analytic(first) - payoff_analytic(second).
  std::vector<double> delta_analytic;
  std::vector<double> delta_mc;
};

SweepComparison run_sweep_comparison(const SweepOptions& opt);

/// target_index,sx,sy,sz,payoff_analytic_1,payoff_mc_1,payoff_analytic_2,
/// payoff_mc_2,delta_p_analytic,delta_p_mc
void write_comparison_csv(std::ostream& os, const SweepComparison& cmp);

struct OracleCheckOptions {
  std::string ensemble = "random";
  int count = 100;
  int rank = 0;  // 0 cycles through ranks 1..4
  int restarts = 50;
  int grid_points = 10000;
  std::uint64_t seed = 1;
  std::string format = "text";
  std::optional<std::filesystem::path> out;
};

struct OracleCheckReport {
  int states = 0;
  double max_discord_gap = 0.0;   // max |oracle - closed form|
  double min_discord_excess = 0.0;  // min (oracle - closed form)
  double max_fidelity_gap = 0.0;  // max (grid - closed form)
  double min_fidelity_excess = 0.0;
  double max_closed_form_discord = 0.0;
  bool passed = false;
};

inline constexpr double kDiscordGapTol = 1e-3;
inline constexpr double kDiscordBelowTol = 1e-6;
inline constexpr double kFidelityGapTol = 5e-3;
inline constexpr double kFidelityBelowTol = 1e-12;

/// Ensembles: random (ranks per `rank`), zero-discord, special.
std::vector<TwoQubitState> make_ensemble(const std::string& name, int count, int rank, std::uint64_t seed);

OracleCheckReport run_oracle_check(const OracleCheckOptions& opt);

// Entry points used by main(); each returns the process exit code.
int cmd_characterize(const CharacterizeOptions& opt, const std::vector<std::string>& argv, std::ostream& out);
int cmd_rsp_sweep(const SweepOptions& opt, const std::vector<std::string>& argv, std::ostream& out);
int cmd_oracle_check(const OracleCheckOptions& opt, const std::vector<std::string>& argv, std::ostream& out);

/// Writes `<path>.manifest.json` describing a run.
void write_manifest(const std::filesystem::path& primary_output, const std::string& command,
                    const std::vector<std::string>& argv, std::uint64_t seed,
                    const std::vector<std::filesystem::path>& outputs, double seconds);

}  // namespace qcorr::cli
