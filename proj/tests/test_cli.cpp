#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "qcorr/state_io.hpp"
#include "test_util.hpp"

using namespace qcorr;
using namespace qcorr::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("state resolution") {
  const StateParams p;
  CHECK(resolve_state("werner", p).ideal.matrix().isApprox(werner(1.0 / 3.0).matrix(), 1e-15));
  CHECK(resolve_state("rho_b", p).ideal.matrix().isApprox(rho_b(0.2, 0.4).matrix(), 1e-15));
  CHECK(resolve_state("rho_b", p).components.components.size() == 4);
  CHECK(resolve_state("bell:phi+", p).ideal.matrix().isApprox(bell(BellKind::phi_plus).matrix(), 1e-15));
  CHECK_THROWS_AS(resolve_state("bell:nope", p), UsageError);
  CHECK_THROWS_AS(resolve_state("ghz", p), UsageError);
  CHECK_THROWS_AS(resolve_state("file:/nonexistent/state.json", p), MalformedStateFileError);
  StateParams bad;
  bad.t = 0.9;
  CHECK_THROWS_AS(resolve_state("rho_b", bad), InvalidWeightsError);
}

TEST_CASE("noise grammar") {
  const NoiseSpec n = parse_noise("poisson:1e4");
  CHECK(n.mean_total == 1e4);
  CHECK_FALSE(n.rot_axis);
  const NoiseSpec r = parse_noise("poisson:500,rot:y:0.05");
  CHECK(r.mean_total == 500);
  REQUIRE(r.rot_axis);
  CHECK(*r.rot_axis == Vec3::UnitY());
  CHECK(r.rot_angle == 0.05);
  CHECK_THROWS_AS(parse_noise("gauss:3"), UsageError);
  CHECK_THROWS_AS(parse_noise("poisson:-1"), UsageError);
  CHECK_THROWS_AS(parse_noise("poisson:abc"), UsageError);
  CHECK_THROWS_AS(parse_noise("poisson:10,rot:w:0.1"), UsageError);
  CHECK_THROWS_AS(parse_noise("poisson:10,drift:1"), UsageError);
}

TEST_CASE("characterize") {
  const Characterization w = characterize(werner(1.0 / 3.0), werner(1.0 / 3.0));
  CHECK(w.state_fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.geometric_discord == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
  CHECK(w.rsp_fidelity == doctest::Approx(1.0 / 9.0).epsilon(1e-12));

  CharacterizeOptions opt;
  opt.state2 = "rho_b";
  opt.format = "csv";
  std::ostringstream out;
  CHECK(cmd_characterize(opt, {}, out) == kExitOk);
  const std::string text = out.str();
  CHECK(text.rfind("quantity,\"werner(lambda=", 0) == 0);
  CHECK(text.find("concurrence,") != std::string::npos);

  opt.format = "xml";
  CHECK_THROWS_AS(cmd_characterize(opt, {}, out), UsageError);
}

TEST_CASE("characterize with noise writes CSV and manifest") {
  TempDir dir("qcorr_cli_characterize");
  CharacterizeOptions opt;
  opt.state = "rho_b";
  opt.noise = "poisson:100000";
  opt.out = dir.path / "table.csv";
  std::ostringstream out;
  CHECK(cmd_characterize(opt, {"qcorr", "characterize"}, out) == kExitOk);
  CHECK(out.str().find("noise: poisson:100000") != std::string::npos);
  CHECK(std::filesystem::exists(dir.path / "table.csv"));
  const auto manifest = nlohmann::json::parse(slurp(dir.path / "table.csv.manifest.json"));
  CHECK(manifest["command"] == "characterize");
  CHECK(manifest["seed"] == 1);
  CHECK(manifest["argv"].size() == 2);
  CHECK(manifest["outputs"].size() == 1);
  CHECK(manifest.contains("wall_clock_seconds"));
  CHECK(manifest.contains("version"));
}

TEST_CASE("rsp sweep comparison") {
  SweepOptions opt;
  opt.state2 = "rho_b";
  opt.shots = 1000;
  const SweepComparison cmp = run_sweep_comparison(opt);
  REQUIRE(cmp.second);
  REQUIRE(cmp.delta_analytic.size() == 58);
  for (double d : cmp.delta_analytic) CHECK(std::abs(d - 16.0 / 225.0) <= 1e-12);

  const SweepComparison again = run_sweep_comparison(opt);
  CHECK(again.delta_mc == cmp.delta_mc);

  TempDir dir("qcorr_cli_sweep");
  opt.out = dir.path / "sweep.csv";
  std::ostringstream out;
  CHECK(cmd_rsp_sweep(opt, {"qcorr"}, out) == kExitOk);
  CHECK(out.str().find("delta P (analytic): min 0.071111") != std::string::npos);
  CHECK(slurp(dir.path / "sweep.csv").rfind("target_index,sx,sy,sz,payoff_analytic_1,", 0) == 0);
  CHECK(slurp(dir.path / "sweep_state1.csv").rfind("target_index,sx,sy,sz,beta_x,", 0) == 0);
  CHECK(std::filesystem::exists(dir.path / "sweep_state2.csv"));
  const auto manifest = nlohmann::json::parse(slurp(dir.path / "sweep.csv.manifest.json"));
  CHECK(manifest["outputs"].size() == 3);
}

TEST_CASE("named comparisons") {
  SweepOptions opt;
  opt.state = "bell:psi-";
  opt.state2 = "maximally-mixed";
  opt.shots = 100;
  for (double d : run_sweep_comparison(opt).delta_analytic) CHECK(std::abs(d - 1.0) <= 1e-12);

  CharacterizeOptions ch;
  ch.state = "maximally-mixed";
  ch.format = "csv";
  std::ostringstream out;
  cmd_characterize(ch, {}, out);
  CHECK(out.str().find("purity,0.25\n") != std::string::npos);
  CHECK(out.str().find("geometric_discord,0\n") != std::string::npos);
}

TEST_CASE("CSV output is deterministic and round-trips") {
  TempDir dir("qcorr_cli_determinism");
  SweepOptions opt;
  opt.state2 = "rho_b";
  opt.noise = "poisson:10000,rot:y:0.05";
  opt.shots = 5000;
  opt.seed = 42;
  std::ostringstream sink;
  opt.out = dir.path / "a.csv";
  cmd_rsp_sweep(opt, {}, sink);
  opt.out = dir.path / "b.csv";
  cmd_rsp_sweep(opt, {}, sink);
  CHECK(slurp(dir.path / "a.csv") == slurp(dir.path / "b.csv"));
  CHECK(slurp(dir.path / "a_state1.csv") == slurp(dir.path / "b_state1.csv"));

  opt.out.reset();
  const SweepComparison cmp = run_sweep_comparison(opt);
  std::istringstream in(slurp(dir.path / "a.csv"));
  std::string line;
  std::getline(in, line);
  for (std::size_t i = 0; std::getline(in, line); ++i) {
    std::vector<double> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(std::stod(cell));
    REQUIRE(f.size() == 10);
    CHECK(std::abs(f[4] - cmp.first.records[i].payoff_analytic) <= 1e-12);
    CHECK(std::abs(f[5] - cmp.first.records[i].payoff_mc) <= 1e-12);
    CHECK(std::abs(f[8] - cmp.delta_analytic[i]) <= 1e-12);
    CHECK(std::abs(f[9] - cmp.delta_mc[i]) <= 1e-12);
  }
}

TEST_CASE("oracle check") {
  OracleCheckOptions opt;
  opt.count = 4;
  opt.restarts = 8;
  opt.grid_points = 1000;
  const OracleCheckReport r = run_oracle_check(opt);
  CHECK(r.states == 4);
  CHECK(r.passed);
  CHECK(r.max_discord_gap <= kDiscordGapTol);

  opt.ensemble = "zero-discord";
  const OracleCheckReport z = run_oracle_check(opt);
  CHECK(z.passed);
  CHECK(z.max_closed_form_discord <= 1e-9);

  CHECK(make_ensemble("special", 6, 0, 1).size() == 6);
  CHECK_THROWS_AS(make_ensemble("gaussian", 6, 0, 1), UsageError);

  opt.format = "csv";
  std::ostringstream out;
  CHECK(cmd_oracle_check(opt, {}, out) == kExitOk);
  CHECK(out.str().find(",1\n") != std::string::npos);
}

}  // TEST_SUITE
