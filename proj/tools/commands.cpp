#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qcorr/discord.hpp"
#include "qcorr/state_io.hpp"
#include "qcorr/tomo.hpp"

namespace qcorr::cli {

namespace {

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("cannot parse " + what + " '" + text + "'");
  }
}

std::string fmt_param(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  std::mt19937_64 g(seq);
  return g();
}

std::filesystem::path sibling(const std::filesystem::path& p, const std::string& suffix) {
  std::filesystem::path out = p.parent_path() / (p.stem().string() + suffix + p.extension().string());
  return out;
}

}  // namespace

Resource resolve_state(const std::string& spec, const StateParams& params) {
  if (spec == "werner") {
    MixtureSpec parts = werner_components(params.lambda);
    return {"werner(lambda=" + fmt_param(params.lambda) + ")", mix(parts), parts};
  }
  if (spec == "rho_b") {
    MixtureSpec parts = rho_b_components(params.k, params.t);
    return {"rho_b(k=" + fmt_param(params.k) + ",t=" + fmt_param(params.t) + ")", mix(parts), parts};
  }
  if (spec == "maximally-mixed") {
    const TwoQubitState s = maximally_mixed();
    return {"maximally-mixed", s, MixtureSpec{{{1.0, s}}}};
  }
  if (spec.rfind("bell:", 0) == 0) {
    BellKind kind;
    try {
      kind = parse_bell_kind(spec.substr(5));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const TwoQubitState s = bell(kind);
    return {spec, s, MixtureSpec{{{1.0, s}}}};
  }
  if (spec.rfind("file:", 0) == 0) {
    const TwoQubitState s = load_state_file(spec.substr(5));
    return {spec, s, MixtureSpec{{{1.0, s}}}};
  }
  throw UsageError("unknown state family '" + spec + "' (expected werner, rho_b, bell:<kind>, maximally-mixed, file:<path>)");
}

NoiseSpec parse_noise(const std::string& spec) {
  NoiseSpec noise;
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.empty() || parts[0].rfind("poisson:", 0) != 0)
    throw UsageError("noise spec must start with poisson:<mean_total>");
  noise.mean_total = parse_double(parts[0].substr(8), "mean_total");
  if (!(noise.mean_total > 0)) throw UsageError("poisson mean_total must be positive");
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (p.rfind("rot:", 0) != 0) throw UsageError("unknown noise component '" + p + "'");
    const auto colon = p.find(':', 4);
    if (colon == std::string::npos) throw UsageError("rotation needs rot:<axis>:<angle>");
    const std::string axis = p.substr(4, colon - 4);
    if (axis == "x")
      noise.rot_axis = Vec3::UnitX();
    else if (axis == "y")
      noise.rot_axis = Vec3::UnitY();
    else if (axis == "z")
      noise.rot_axis = Vec3::UnitZ();
    else
      throw UsageError("rotation axis must be x, y or z");
    noise.rot_angle = parse_double(p.substr(colon + 1), "rotation angle");
  }
  return noise;
}

NoisyResource apply_noise(const Resource& resource, const NoiseSpec& noise, std::uint64_t seed) {
  std::vector<std::pair<TwoQubitState, double>> parts;
  for (const auto& [w, s] : resource.components.components) {
    if (noise.rot_axis)
      parts.emplace_back(perturb_local_rotation(s, *noise.rot_axis, noise.rot_angle), w);
    else
      parts.emplace_back(s, w);
  }
  const Reconstruction rec = linear_inversion(mixture_by_duration(parts, noise.mean_total, seed));
  return {rec.state, rec.psd_repaired};
}

Characterization characterize(const TwoQubitState& state, const TwoQubitState& ideal) {
  Characterization c;
  c.state_fidelity = state_fidelity(state, ideal);
  c.purity = purity(state);
  c.concurrence = concurrence(state);
  c.geometric_discord = geometric_discord(state).value;
  c.rsp_fidelity = rsp_fidelity(state);
  return c;
}

SweepComparison run_sweep_comparison(const SweepOptions& opt) {
  if (opt.targets < 1) throw UsageError("--targets must be >= 1");
  if (opt.shots < 1) throw UsageError("--shots must be >= 1");
  const std::optional<NoiseSpec> noise = opt.noise ? std::optional(parse_noise(*opt.noise)) : std::nullopt;

  auto prepare = [&](const std::string& spec, std::uint32_t stream) {
    const Resource r = resolve_state(spec, opt.params);
    if (!noise) return r.ideal;
    return apply_noise(r, *noise, derive_seed(opt.seed, stream)).state;
  };

  const std::vector<Vec3> targets = fibonacci_sphere(opt.targets);
  SweepComparison cmp;
  cmp.first = sweep(prepare(opt.state, 1), targets, opt.shots, derive_seed(opt.seed, 11));
  if (opt.state2) {
    cmp.second = sweep(prepare(*opt.state2, 2), targets, opt.shots, derive_seed(opt.seed, 12));
    for (std::size_t i = 0; i < targets.size(); ++i) {
      cmp.delta_analytic.push_back(cmp.first.records[i].payoff_analytic - cmp.second->records[i].payoff_analytic);
      cmp.delta_mc.push_back(cmp.first.records[i].payoff_mc - cmp.second->records[i].payoff_mc);
    }
  }
  return cmp;
}

void write_comparison_csv(std::ostream& os, const SweepComparison& cmp) {
  const auto old = os.precision(17);
  os << "target_index,sx,sy,sz,payoff_analytic_1,payoff_mc_1,payoff_analytic_2,payoff_mc_2,delta_p_analytic,"
        "delta_p_mc\n";
  for (std::size_t i = 0; i < cmp.first.records.size(); ++i) {
    const auto& a = cmp.first.records[i];
    const auto& b = cmp.second->records[i];
    os << i << ',' << a.target(0) << ',' << a.target(1) << ',' << a.target(2) << ',' << a.payoff_analytic << ','
       << a.payoff_mc << ',' << b.payoff_analytic << ',' << b.payoff_mc << ',' << cmp.delta_analytic[i] << ','
       << cmp.delta_mc[i] << '\n';
  }
  os.precision(old);
}

std::vector<TwoQubitState> make_ensemble(const std::string& name, int count, int rank, std::uint64_t seed) {
  if (count < 1) throw UsageError("--count must be >= 1");
  if (rank < 0 || rank > 4) throw UsageError("--rank must be in 0..4");
  std::vector<TwoQubitState> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint32_t>(i));
    if (name == "random")
      out.push_back(random_state(s, rank == 0 ? 1 + i % 4 : rank));
    else if (name == "zero-discord")
      out.push_back(random_zero_discord(s));
    else if (name == "special")
      out.push_back(i % 2 == 0 ? random_maximally_mixed_marginals(s) : random_isotropic(s));
    else
      throw UsageError("unknown ensemble '" + name + "' (expected random, zero-discord, special)");
  }
  return out;
}

OracleCheckReport run_oracle_check(const OracleCheckOptions& opt) {
  if (opt.restarts < 1) throw UsageError("--restarts must be >= 1");
  if (opt.grid_points < 100) throw UsageError("--grid-points must be >= 100");
  const auto states = make_ensemble(opt.ensemble, opt.count, opt.rank, opt.seed);
  OracleCheckReport rep;
  rep.states = static_cast<int>(states.size());
  rep.min_discord_excess = std::numeric_limits<double>::infinity();
  rep.min_fidelity_excess = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const double closed = geometric_discord(states[i]).value;
    DiscordOracleOptions o;
    o.restarts = opt.restarts;
    o.seed = derive_seed(opt.seed, 1000 + static_cast<std::uint32_t>(i));
    const double oracle = geometric_discord_oracle(states[i], o);
    rep.max_discord_gap = std::max(rep.max_discord_gap, std::abs(oracle - closed));
    rep.min_discord_excess = std::min(rep.min_discord_excess, oracle - closed);
    rep.max_closed_form_discord = std::max(rep.max_closed_form_discord, closed);

    const double f = rsp_fidelity(states[i]);
    const double grid = rsp_fidelity_oracle(states[i], opt.grid_points);
    rep.max_fidelity_gap = std::max(rep.max_fidelity_gap, grid - f);
    rep.min_fidelity_excess = std::min(rep.min_fidelity_excess, grid - f);
  }
  rep.passed = rep.max_discord_gap <= kDiscordGapTol && rep.min_discord_excess >= -kDiscordBelowTol &&
               rep.max_fidelity_gap <= kFidelityGapTol && rep.min_fidelity_excess >= -kFidelityBelowTol;
  if (opt.ensemble == "zero-discord") rep.passed = rep.passed && rep.max_closed_form_discord <= 1e-9;
  return rep;
}

int cmd_characterize(const CharacterizeOptions& opt, const std::vector<std::string>& argv, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (opt.format != "text" && opt.format != "csv") throw UsageError("--format must be csv or text");
  const std::optional<NoiseSpec> noise = opt.noise ? std::optional(parse_noise(*opt.noise)) : std::nullopt;

  std::vector<std::string> labels;
  std::vector<Characterization> cols;
  std::vector<bool> repaired;
  std::vector<std::string> specs{opt.state};
  if (opt.state2) specs.push_back(*opt.state2);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const Resource r = resolve_state(specs[i], opt.params);
    labels.push_back(r.label);
    if (noise) {
      const NoisyResource nr = apply_noise(r, *noise, derive_seed(opt.seed, static_cast<std::uint32_t>(i + 1)));
      cols.push_back(characterize(nr.state, r.ideal));
      repaired.push_back(nr.psd_repaired);
    } else {
      cols.push_back(characterize(r.ideal, r.ideal));
      repaired.push_back(false);
    }
  }

  const std::array<std::pair<const char*, double Characterization::*>, 5> rows = {{
      {"state_fidelity", &Characterization::state_fidelity},
      {"purity", &Characterization::purity},
      {"concurrence", &Characterization::concurrence},
      {"geometric_discord", &Characterization::geometric_discord},
      {"rsp_fidelity", &Characterization::rsp_fidelity},
  }};

  std::ostringstream csv;
  csv.precision(17);
  csv << "quantity";
  for (const auto& l : labels) csv << ",\"" << l << '"';
  csv << '\n';
  for (const auto& [name, member] : rows) {
    csv << name;
    for (const auto& c : cols) csv << ',' << c.*member;
    csv << '\n';
  }

  if (opt.format == "csv") {
    out << csv.str();
  } else {
    out << std::left << std::setw(20) << "quantity";
    for (const auto& l : labels) out << std::setw(26) << l;
    out << '\n';
    for (const auto& [name, member] : rows) {
      out << std::setw(20) << name;
      for (const auto& c : cols) out << std::setw(26) << std::fixed << std::setprecision(6) << c.*member;
      out << '\n';
    }
    if (noise) {
      out << "noise: " << *opt.noise << " (count levels are simulation choices)";
      for (std::size_t i = 0; i < repaired.size(); ++i)
        if (repaired[i]) out << "; PSD repair applied to " << labels[i];
      out << '\n';
    }
    out.unsetf(std::ios::floatfield);
  }

  if (opt.out) {
    write_file_atomically(*opt.out, csv.str());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(*opt.out, "characterize", argv, opt.seed, {*opt.out}, secs);
  }
  return kExitOk;
}

int cmd_rsp_sweep(const SweepOptions& opt, const std::vector<std::string>& argv, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (opt.format != "text" && opt.format != "csv") throw UsageError("--format must be csv or text");
  const SweepComparison cmp = run_sweep_comparison(opt);

  std::ostringstream primary;
  if (cmp.second)
    write_comparison_csv(primary, cmp);
  else
    write_sweep_csv(primary, cmp.first);

  if (opt.format == "csv") {
    out << primary.str();
  } else {
    auto mean_of = [](const SweepResult& r, double SweepRecord::*m) {
      double s = 0.0;
      for (const auto& rec : r.records) s += rec.*m;
      return s / static_cast<double>(r.records.size());
    };
    out << std::setprecision(6) << std::fixed;
    out << "targets: " << opt.targets << "  shots: " << opt.shots << "  seed: " << opt.seed;
    if (opt.noise) out << "  noise: " << *opt.noise;
    out << '\n';
    out << "state 1 " << opt.state << ": mean payoff analytic " << mean_of(cmp.first, &SweepRecord::payoff_analytic)
        << ", mc " << mean_of(cmp.first, &SweepRecord::payoff_mc) << '\n';
    if (cmp.second) {
      out << "state 2 " << *opt.state2 << ": mean payoff analytic "
          << mean_of(*cmp.second, &SweepRecord::payoff_analytic) << ", mc "
          << mean_of(*cmp.second, &SweepRecord::payoff_mc) << '\n';
      const auto [mn, mx] = std::minmax_element(cmp.delta_analytic.begin(), cmp.delta_analytic.end());
      const double mean = std::accumulate(cmp.delta_analytic.begin(), cmp.delta_analytic.end(), 0.0) /
                          static_cast<double>(cmp.delta_analytic.size());
      const double min_mc = *std::min_element(cmp.delta_mc.begin(), cmp.delta_mc.end());
      out << "delta P (analytic): min " << *mn << ", mean " << mean << ", max " << *mx << '\n';
      out << "delta P (mc): min " << min_mc << '\n';
    }
    out.unsetf(std::ios::floatfield);
  }

  if (opt.out) {
    std::vector<std::filesystem::path> outputs{*opt.out};
    write_file_atomically(*opt.out, primary.str());
    if (cmp.second) {
      const auto p1 = sibling(*opt.out, "_state1");
      const auto p2 = sibling(*opt.out, "_state2");
      std::ostringstream s1, s2;
      write_sweep_csv(s1, cmp.first);
      write_sweep_csv(s2, *cmp.second);
      write_file_atomically(p1, s1.str());
      write_file_atomically(p2, s2.str());
      outputs.push_back(p1);
      outputs.push_back(p2);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(*opt.out, "rsp-sweep", argv, opt.seed, outputs, secs);
  }
  return kExitOk;
}

int cmd_oracle_check(const OracleCheckOptions& opt, const std::vector<std::string>& argv, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  if (opt.format != "text" && opt.format != "csv") throw UsageError("--format must be csv or text");
  const OracleCheckReport rep = run_oracle_check(opt);

  std::ostringstream csv;
  csv.precision(17);
  csv << "ensemble,states,max_discord_gap,min_discord_excess,max_fidelity_gap,min_fidelity_excess,"
         "max_closed_form_discord,passed\n"
      << opt.ensemble << ',' << rep.states << ',' << rep.max_discord_gap << ',' << rep.min_discord_excess << ','
      << rep.max_fidelity_gap << ',' << rep.min_fidelity_excess << ',' << rep.max_closed_form_discord << ','
      << (rep.passed ? 1 : 0) << '\n';

  if (opt.format == "csv") {
    out << csv.str();
  } else {
    out << std::scientific << std::setprecision(3);
    out << "ensemble " << opt.ensemble << ", " << rep.states << " states, " << opt.restarts << " restarts, "
        << opt.grid_points << " grid points\n";
    out << "discord: max |oracle - closed form| = " << rep.max_discord_gap << " (tol " << kDiscordGapTol
        << "), min (oracle - closed form) = " << rep.min_discord_excess << " (tol -" << kDiscordBelowTol << ")\n";
    out << "fidelity: max (grid - closed form) = " << rep.max_fidelity_gap << " (tol " << kFidelityGapTol
        << "), min = " << rep.min_fidelity_excess << " (tol -" << kFidelityBelowTol << ")\n";
    out << "max closed-form discord = " << rep.max_closed_form_discord << '\n';
    out << (rep.passed ? "PASS" : "FAIL") << '\n';
    out.unsetf(std::ios::floatfield);
  }
  if (opt.out) {
    write_file_atomically(*opt.out, csv.str());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(*opt.out, "oracle-check", argv, opt.seed, {*opt.out}, secs);
  }
  return rep.passed ? kExitOk : kExitValidation;
}

void write_manifest(const std::filesystem::path& primary_output, const std::string& command,
                    const std::vector<std::string>& argv, std::uint64_t seed,
                    const std::vector<std::filesystem::path>& outputs, double seconds) {
  nlohmann::json m;
  m["command"] = command;
  m["argv"] = argv;
  m["seed"] = seed;
  m["version"] = QCORR_VERSION;
  std::vector<std::string> paths;
  for (const auto& p : outputs) paths.push_back(p.string());
  m["outputs"] = paths;
  m["wall_clock_seconds"] = seconds;
  std::filesystem::path mp = primary_output;
  mp += ".manifest.json";
  write_file_atomically(mp, m.dump(2) + "\n");
}

}  // namespace qcorr::cli
