// qcorr: characterize two-qubit resources, run RSP payoff sweeps and
// cross-validate closed forms against brute-force oracles.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qcorr/state_io.hpp"
#include "qcorr/tomo.hpp"

namespace {

using namespace qcorr;
using namespace qcorr::cli;

void add_state_flags(CLI::App* sub, std::string& state, StateParams& p) {
  sub->add_option("--state", state, "werner | rho_b | bell:<kind> | maximally-mixed | file:<path>")
      ->capture_default_str();
  sub->add_option("--lambda", p.lambda, "Werner weight")->capture_default_str();
  sub->add_option("--k", p.k, "rho_b correlation parameter")->capture_default_str();
  sub->add_option("--t", p.t, "rho_b local-vector parameter")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);

  CLI::App app{"Two-qubit correlations and remote-state-preparation toolkit"};
  app.set_version_flag("--version", std::string(QCORR_VERSION));
  app.require_subcommand(1);

  CharacterizeOptions ch;
  std::string ch_state2;
  auto* c = app.add_subcommand("characterize", "State fidelity, purity, concurrence, discord and RSP fidelity");
  add_state_flags(c, ch.state, ch.params);
  c->add_option("--state2", ch_state2, "second state for a side-by-side table");
  std::string ch_noise;
  c->add_option("--noise", ch_noise, "poisson:<mean_total>[,rot:<x|y|z>:<angle>]");
  c->add_option("--seed", ch.seed)->capture_default_str();
  c->add_option("--format", ch.format)->check(CLI::IsMember({"csv", "text"}))->capture_default_str();
  std::string ch_out;
  c->add_option("--out", ch_out, "write CSV (and manifest) here");

  SweepOptions sw;
  std::string sw_state2, sw_noise, sw_out;
  auto* s = app.add_subcommand("rsp-sweep", "Per-target payoffs on a Fibonacci lattice of targets");
  add_state_flags(s, sw.state, sw.params);
  s->add_option("--state2", sw_state2, "second resource for delta P");
  s->add_option("--targets", sw.targets)->capture_default_str();
  s->add_option("--shots", sw.shots)->capture_default_str();
  s->add_option("--seed", sw.seed)->capture_default_str();
  s->add_option("--noise", sw_noise, "poisson:<mean_total>[,rot:<x|y|z>:<angle>]");
  s->add_option("--format", sw.format)->check(CLI::IsMember({"csv", "text"}))->capture_default_str();
  s->add_option("--out", sw_out, "write CSV(s) (and manifest) here");

  OracleCheckOptions oc;
  std::string oc_out;
  auto* o = app.add_subcommand("oracle-check", "Closed forms vs brute-force discord and beta-grid fidelity");
  o->add_option("--ensemble", oc.ensemble)
      ->check(CLI::IsMember({"random", "zero-discord", "special"}))
      ->capture_default_str();
  o->add_option("--count", oc.count)->capture_default_str();
  o->add_option("--rank", oc.rank, "0 cycles ranks 1..4")->capture_default_str();
  o->add_option("--restarts", oc.restarts)->capture_default_str();
  o->add_option("--grid-points", oc.grid_points)->capture_default_str();
  o->add_option("--seed", oc.seed)->capture_default_str();
  o->add_option("--format", oc.format)->check(CLI::IsMember({"csv", "text"}))->capture_default_str();
  o->add_option("--out", oc_out);

  std::string es_state = "werner", es_encoding = "matrix", es_out;
  StateParams es_params;
  auto* e = app.add_subcommand("emit-state", "Write a named state as a JSON state file");
  add_state_flags(e, es_state, es_params);
  e->add_option("--encoding", es_encoding)->check(CLI::IsMember({"matrix", "bloch"}))->capture_default_str();
  e->add_option("--out", es_out, "output path (stdout when omitted)");

  std::string sc_state = "werner", sc_out, sc_noise = "poisson:10000";
  StateParams sc_params;
  std::uint64_t sc_seed = 1;
  auto* sc = app.add_subcommand("simulate-counts", "Duration-weighted Poisson counts for the nine Pauli settings");
  add_state_flags(sc, sc_state, sc_params);
  sc->add_option("--noise", sc_noise, "poisson:<mean_total>[,rot:<x|y|z>:<angle>]")->capture_default_str();
  sc->add_option("--seed", sc_seed)->capture_default_str();
  sc->add_option("--out", sc_out, "CSV path (stdout when omitted)");

  std::string rc_counts, rc_out, rc_encoding = "matrix";
  auto* rc = app.add_subcommand("reconstruct", "Linear-inversion reconstruction from a counts CSV");
  rc->add_option("--counts", rc_counts, "counts CSV (k,l,n_pp,n_pm,n_mp,n_mm)")->required();
  rc->add_option("--encoding", rc_encoding)->check(CLI::IsMember({"matrix", "bloch"}))->capture_default_str();
  rc->add_option("--out", rc_out, "state file path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c->parsed()) {
      if (!ch_state2.empty()) ch.state2 = ch_state2;
      if (!ch_noise.empty()) ch.noise = ch_noise;
      if (!ch_out.empty()) ch.out = ch_out;
      return cmd_characterize(ch, args, std::cout);
    }
    if (s->parsed()) {
      if (!sw_state2.empty()) sw.state2 = sw_state2;
      if (!sw_noise.empty()) sw.noise = sw_noise;
      if (!sw_out.empty()) sw.out = sw_out;
      return cmd_rsp_sweep(sw, args, std::cout);
    }
    if (o->parsed()) {
      if (!oc_out.empty()) oc.out = oc_out;
      return cmd_oracle_check(oc, args, std::cout);
    }
    if (e->parsed()) {
      const Resource r = resolve_state(es_state, es_params);
      const auto enc = es_encoding == "bloch" ? StateEncoding::bloch : StateEncoding::matrix;
      if (es_out.empty())
        std::cout << state_to_json(r.ideal, enc);
      else
        save_state_file(es_out, r.ideal, enc);
      return kExitOk;
    }
    if (sc->parsed()) {
      const Resource r = resolve_state(sc_state, sc_params);
      const NoiseSpec noise = parse_noise(sc_noise);
      std::vector<std::pair<TwoQubitState, double>> parts;
      for (const auto& [w, st] : r.components.components)
        parts.emplace_back(noise.rot_axis ? perturb_local_rotation(st, *noise.rot_axis, noise.rot_angle) : st, w);
      std::ostringstream csv;
      write_counts_csv(csv, mixture_by_duration(parts, noise.mean_total, sc_seed));
      if (sc_out.empty()) {
        std::cout << csv.str();
      } else {
        write_file_atomically(sc_out, csv.str());
        write_manifest(sc_out, "simulate-counts", args, sc_seed, {sc_out}, 0.0);
      }
      return kExitOk;
    }
    if (rc->parsed()) {
      std::ifstream in(rc_counts);
      if (!in) throw UsageError("cannot open counts file " + rc_counts);
      const Reconstruction rec = linear_inversion(read_counts_csv(in));
      if (rec.psd_repaired)
        std::cerr << "note: negative eigenvalue " << rec.raw_min_eigenvalue << " clipped during reconstruction\n";
      const auto enc = rc_encoding == "bloch" ? StateEncoding::bloch : StateEncoding::matrix;
      if (rc_out.empty())
        std::cout << state_to_json(rec.state, enc);
      else
        save_state_file(rc_out, rec.state, enc);
      return kExitOk;
    }
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const MalformedStateFileError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}
