#include <numbers>
#include <sstream>

#include <Eigen/Geometry>

#include "qcorr/qstate.hpp"
#include "qcorr/states.hpp"
#include "qcorr/tomo.hpp"
#include "test_util.hpp"

using namespace qcorr;
using qcorr::test::max_abs_diff;

namespace {

/// Counts equal to the exact expectations scaled by a large total.
std::vector<CountRecord> exact_counts(const TwoQubitState& rho, double total) {
  std::vector<CountRecord> out;
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 3; ++l) {
      CountRecord r{k, l, {}};
      const auto p = measurement_probabilities(rho, k, l);
      for (int i = 0; i < 4; ++i) r.counts[i] = static_cast<std::uint64_t>(std::llround(p[i] * total));
      out.push_back(r);
    }
  return out;
}

}  // namespace

TEST_SUITE("tomo") {

TEST_CASE("outcome laws") {
  const auto zz = measurement_probabilities(bell(BellKind::psi_minus), 3, 3);
  CHECK(zz[0] == doctest::Approx(0.0));
  CHECK(zz[1] == doctest::Approx(0.5));
  CHECK(zz[2] == doctest::Approx(0.5));
  CHECK(zz[3] == doctest::Approx(0.0));

  const auto b = measurement_probabilities(rho_b(0.2, 0.4), 3, 3);
  // (1 + s_A t + s_B t - s_A s_B k) / 4
  CHECK(b[0] == doctest::Approx(0.4));
  CHECK(b[1] == doctest::Approx(0.3));
  CHECK(b[2] == doctest::Approx(0.3));
  CHECK(b[3] == doctest::Approx(0.0));

  const auto mm = measurement_probabilities(maximally_mixed(), 1, 2);
  for (double p : mm) CHECK(p == doctest::Approx(0.25));
  CHECK_THROWS_AS(measurement_probabilities(maximally_mixed(), 0, 1), std::invalid_argument);
}

TEST_CASE("sampling") {
  const OutcomeProbabilities p{0.1, 0.2, 0.3, 0.4};
  const CountRecord a = sample_counts(1, 2, p, 1e4, 5);
  const CountRecord b = sample_counts(1, 2, p, 1e4, 5);
  CHECK(a.counts == b.counts);
  CHECK(a.k == 1);
  CHECK(a.l == 2);
  CHECK(std::abs(static_cast<double>(a.total()) - 1e4) < 500);
  CHECK(sample_counts(1, 1, p, 0.0, 1).total() == 0);
  CHECK_THROWS_AS(sample_counts(1, 1, p, -1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_counts(1, 1, {-0.1, 0.5, 0.3, 0.3}, 10.0, 1), std::invalid_argument);

  // Mean of the (+,+) count over many draws.
  double mean = 0.0;
  for (std::uint64_t s = 0; s < 2000; ++s) mean += sample_counts(3, 3, p, 100.0, s).counts[0] / 2000.0;
  CHECK(mean == doctest::Approx(10.0).epsilon(0.02));
}

TEST_CASE("linear inversion") {
  SUBCASE("exact counts reproduce the state") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const TwoQubitState s = random_state(seed, 4);
      const Reconstruction r = linear_inversion(exact_counts(s, 1e12));
      CHECK(max_abs_diff(r.state.matrix(), s.matrix()) < 1e-9);
    }
  }
  SUBCASE("noisy counts of a pure state need repair") {
    const Reconstruction r = linear_inversion(measure_state(bell(BellKind::phi_plus), 1000, 3));
    CHECK(r.psd_repaired);
    CHECK(r.raw_min_eigenvalue < 0.0);
    CHECK(state_fidelity(r.state, bell(BellKind::phi_plus)) > 0.95);
  }
  SUBCASE("fidelity grows with the count level") {
    const TwoQubitState s = rho_b(0.2, 0.4);
    CHECK(state_fidelity(linear_inversion(measure_state(s, 1e6, 1)).state, s) > 0.999);
  }
  SUBCASE("missing and empty settings") {
    auto recs = exact_counts(werner(0.5), 1000);
    recs.pop_back();
    CHECK_THROWS_AS(linear_inversion(recs), MissingSettingError);
    recs = exact_counts(werner(0.5), 1000);
    recs[4].counts = {0, 0, 0, 0};
    CHECK_THROWS_AS(linear_inversion(recs), EmptyCountsError);
  }
}

TEST_CASE("estimator statistics") {
  SUBCASE("reconstructed correlations are unbiased") {
    const TwoQubitState s = rho_b(0.2, 0.4);
    const Mat3 truth = to_bloch(s).E;
    const int runs = 500;
    Mat3 sum = Mat3::Zero(), sq = Mat3::Zero();
    for (int i = 0; i < runs; ++i) {
      // Raw linear estimate: E_kl from the counts directly.
      for (const auto& r : measure_state(s, 1e4, 100 + static_cast<std::uint64_t>(i))) {
        const double n = static_cast<double>(r.total());
        const double e = (static_cast<double>(r.counts[0]) - static_cast<double>(r.counts[1]) -
                          static_cast<double>(r.counts[2]) + static_cast<double>(r.counts[3])) / n;
        sum(r.k - 1, r.l - 1) += e;
        sq(r.k - 1, r.l - 1) += e * e;
      }
    }
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        const double mean = sum(k, l) / runs;
        const double sem = std::sqrt((sq(k, l) / runs - mean * mean) / (runs - 1));
        CHECK(std::abs(mean - truth(k, l)) <= 3 * sem + 1e-15);
      }
  }
  SUBCASE("PSD repair becomes rarer with more counts") {
    int low = 0, high = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      low += linear_inversion(measure_state(werner(0.9), 1e3, seed)).psd_repaired ? 1 : 0;
      high += linear_inversion(measure_state(werner(0.9), 1e5, seed)).psd_repaired ? 1 : 0;
    }
    CHECK(low > high);
    INFO("low " << low << ", high " << high);
    CHECK(low >= 30);
    CHECK(high * 2 < low);
  }
}

TEST_CASE("duration-weighted mixtures") {
  const auto comps = rho_b_components(0.2, 0.4);
  std::vector<std::pair<TwoQubitState, double>> parts;
  for (const auto& [w, st] : comps.components) parts.emplace_back(st, w);
  const auto a = mixture_by_duration(parts, 1e5, 7);
  const auto b = mixture_by_duration(parts, 1e5, 7);
  REQUIRE(a.size() == 9);
  for (std::size_t i = 0; i < 9; ++i) CHECK(a[i].counts == b[i].counts);
  CHECK(state_fidelity(linear_inversion(a).state, rho_b(0.2, 0.4)) > 0.99);

  CHECK_THROWS_AS(mixture_by_duration({}, 1e5, 1), std::invalid_argument);
  CHECK_THROWS_AS(mixture_by_duration({{werner(0.2), 0.0}}, 1e5, 1), std::invalid_argument);
  CHECK_THROWS_AS(mixture_by_duration({{werner(0.2), 1.0}}, -1.0, 1), std::invalid_argument);
}

TEST_CASE("local rotation perturbation") {
  const TwoQubitState s = rho_b(0.2, 0.4);
  CHECK(max_abs_diff(perturb_local_rotation(s, Vec3::UnitY(), 0.0).matrix(), s.matrix()) < 1e-15);
  const BlochRep z = to_bloch(perturb_local_rotation(s, Vec3::UnitZ(), 0.7));
  const Mat3 rz = Eigen::AngleAxisd(0.7, Vec3::UnitZ()).toRotationMatrix();
  CHECK(max_abs_diff(z.b, Vec3(0, 0, 0.4)) < 1e-12);
  CHECK(max_abs_diff(z.E, -0.2 * rz.transpose()) < 1e-12);
  const BlochRep pi_z = to_bloch(perturb_local_rotation(werner(0.5), Vec3::UnitZ(), std::numbers::pi));
  CHECK(max_abs_diff(pi_z.E, Mat3(Vec3(0.5, 0.5, -0.5).asDiagonal())) < 1e-12);
  const BlochRep r = to_bloch(perturb_local_rotation(s, Vec3::UnitX(), std::numbers::pi / 2));
  CHECK(max_abs_diff(r.b, Vec3(0, -0.4, 0)) < 1e-12);
  CHECK(max_abs_diff(r.a, Vec3(0, 0, 0.4)) < 1e-12);
  CHECK_THROWS_AS(perturb_local_rotation(s, Vec3::Zero(), 0.1), std::invalid_argument);
}

TEST_CASE("counts CSV round trip") {
  const auto recs = measure_state(werner(0.4), 500, 2);
  std::stringstream ss;
  write_counts_csv(ss, recs);
  const auto back = read_counts_csv(ss);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].k == recs[i].k);
    CHECK(back[i].l == recs[i].l);
    CHECK(back[i].counts == recs[i].counts);
  }
  std::istringstream no_header("1,1,1,2,3,4\n");
  CHECK_THROWS_AS(read_counts_csv(no_header), std::invalid_argument);
  std::istringstream negative("k,l,n_pp,n_pm,n_mp,n_mm\n1,1,1,-2,3,4\n");
  CHECK_THROWS_AS(read_counts_csv(negative), std::invalid_argument);
  std::istringstream short_row("k,l,n_pp,n_pm,n_mp,n_mm\n1,1,1,2\n");
  CHECK_THROWS_AS(read_counts_csv(short_row), std::invalid_argument);
}

}  // TEST_SUITE
