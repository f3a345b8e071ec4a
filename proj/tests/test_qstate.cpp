#include <cmath>

#include <Eigen/Eigenvalues>

#include "qcorr/qstate.hpp"
#include "qcorr/states.hpp"
#include "test_util.hpp"

using namespace qcorr;
using qcorr::test::max_abs_diff;

TEST_SUITE("qstate") {

TEST_CASE("validation rejects each defect with its own error") {
  Mat4c m = 0.25 * Mat4c::Identity();
  m(0, 1) = 0.1;  // no matching conjugate entry
  CHECK_THROWS_AS(TwoQubitState{m}, NotHermitianError);
  CHECK_THROWS_AS(TwoQubitState{Mat4c(0.3 * Mat4c::Identity())}, NotUnitTraceError);
  Mat4c neg = Mat4c::Zero();
  neg.diagonal() << 0.6, 0.6, 0.1, -0.3;
  CHECK_THROWS_AS(TwoQubitState{neg}, NotAStateError);
  // Tiny negative eigenvalues from roundoff are accepted.
  Mat4c tiny = Mat4c::Zero();
  tiny.diagonal() << 0.5, 0.5 + 1e-10, 0.0, -1e-10;
  CHECK_NOTHROW(TwoQubitState{tiny});
}

TEST_CASE("to_bloch of the named families") {
  const BlochRep singlet = to_bloch(bell(BellKind::psi_minus));
  CHECK(singlet.a.norm() < 1e-15);
  CHECK(singlet.b.norm() < 1e-15);
  CHECK(max_abs_diff(singlet.E, -Mat3::Identity()) < 1e-15);

  for (double lambda : {0.0, 0.2, 1.0 / 3.0, 0.77, 1.0}) {
    const BlochRep w = to_bloch(werner(lambda));
    CHECK(w.a.norm() < 1e-12);
    CHECK(w.b.norm() < 1e-12);
    CHECK(max_abs_diff(w.E, -lambda * Mat3::Identity()) < 1e-12);
  }

  const BlochRep b = to_bloch(rho_b(0.2, 0.4));
  CHECK(max_abs_diff(b.a, Vec3(0, 0, 0.4)) < 1e-12);
  CHECK(max_abs_diff(b.b, Vec3(0, 0, 0.4)) < 1e-12);
  CHECK(max_abs_diff(b.E, -0.2 * Mat3::Identity()) < 1e-12);
}

TEST_CASE("from_bloch") {
  CHECK(max_abs_diff(from_bloch(BlochRep{}).matrix(), 0.25 * Mat4c::Identity()) < 1e-15);

  BlochRep singlet;
  singlet.E = -Mat3::Identity();
  CHECK(max_abs_diff(from_bloch(singlet).matrix(), bell(BellKind::psi_minus).matrix()) < 1e-15);

  // E = +1 has spectrum {-1/2, 1/2, 1/2, 1/2}.
  BlochRep bad;
  bad.E = Mat3::Identity();
  Eigen::SelfAdjointEigenSolver<Mat4c> es(bloch_matrix(bad));
  CHECK(es.eigenvalues()(0) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK_THROWS_AS(from_bloch(bad), NotAStateError);
}

TEST_CASE("round trip through the Bloch representation") {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const TwoQubitState rho = random_state(seed, 1 + static_cast<int>(seed % 4));
    worst = std::max(worst, max_abs_diff(from_bloch(to_bloch(rho)).matrix(), rho.matrix()));
    const BlochRep rep = to_bloch(rho);
    CHECK(rep.a.norm() <= 1 + 1e-9);
    CHECK(rep.b.norm() <= 1 + 1e-9);
    CHECK(rep.E.cwiseAbs().maxCoeff() <= 1 + 1e-9);
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("schmidt_canonical") {
  SUBCASE("isotropic and already diagonal tensors") {
    const SchmidtForm iso = schmidt_canonical(-0.3 * Mat3::Identity());
    CHECK(max_abs_diff(iso.singular_values, Vec3(0.3, 0.3, 0.3)) < 1e-15);
    const Mat3 d = Vec3(0.9, 0, 0).asDiagonal();
    CHECK(max_abs_diff(schmidt_canonical(d).singular_values, Vec3(0.9, 0, 0)) < 1e-15);
    CHECK(max_abs_diff(schmidt_canonical(Mat3::Zero()).singular_values, Vec3::Zero()) == 0.0);
  }

  SUBCASE("singular values match the eigenvalues of E^T E; rotations are proper") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
      Mat3 E;
      for (int i = 0; i < 9; ++i) E(i / 3, i % 3) = u(rng);
      const SchmidtForm f = schmidt_canonical(E);
      Eigen::SelfAdjointEigenSolver<Mat3> es(E.transpose() * E);
      Vec3 expected = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().reverse();
      CHECK(max_abs_diff(f.singular_values, expected) <= 1e-9);
      CHECK(f.singular_values(0) >= f.singular_values(1));
      CHECK(f.singular_values(1) >= f.singular_values(2));
      CHECK(f.rot_a.determinant() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(f.rot_b.determinant() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(max_abs_diff(f.rot_a * E * f.rot_b.transpose(), f.diagonal()) <= 1e-9);
    }
  }
}

TEST_CASE("purity") {
  CHECK(purity(maximally_mixed()) == doctest::Approx(0.25).epsilon(1e-15));
  // (1 + 3 lambda^2) / 4
  CHECK(purity(werner(1.0 / 3.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // 0.2^2 + 0.4^2 + 0^2 + 0.4^2
  CHECK(purity(rho_b(0.2, 0.4)) == doctest::Approx(0.36).epsilon(1e-14));
}

TEST_CASE("state_fidelity") {
  const TwoQubitState w = werner(0.6);
  CHECK(state_fidelity(w, w) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(state_fidelity(bell(BellKind::psi_plus), bell(BellKind::psi_minus)) < 1e-12);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const TwoQubitState pure = random_state(seed, 1);
    CHECK(state_fidelity(maximally_mixed(), pure) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(state_fidelity(pure, maximally_mixed()) == doctest::Approx(0.25).epsilon(1e-9));
  }
  // Pure states: |<psi|phi>|^2 = Tr(rho sigma).
  const TwoQubitState p = random_state(7, 1), q = random_state(8, 1);
  const double overlap = (p.matrix() * q.matrix()).trace().real();
  CHECK(state_fidelity(p, q) == doctest::Approx(overlap).epsilon(1e-9));
  // Symmetry on mixed states.
  const TwoQubitState r = random_state(9, 4), s = random_state(10, 3);
  CHECK(state_fidelity(r, s) == doctest::Approx(state_fidelity(s, r)).epsilon(1e-9));
}

TEST_CASE("entropy and mutual information") {
  CHECK(von_neumann_entropy(random_state(3, 1).matrix()) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(von_neumann_entropy(maximally_mixed().matrix()) == doctest::Approx(2.0).epsilon(1e-14));
  // Spectrum {1/2, 1/6, 1/6, 1/6}.
  CHECK(von_neumann_entropy(werner(1.0 / 3.0).matrix()) == doctest::Approx(1.792481250360578).epsilon(1e-12));
  CHECK(mutual_information(werner(1.0 / 3.0)) == doctest::Approx(0.20751874963942196).epsilon(1e-11));
  for (auto kind : {BellKind::psi_plus, BellKind::psi_minus, BellKind::phi_plus, BellKind::phi_minus})
    CHECK(mutual_information(bell(kind)) == doctest::Approx(2.0).epsilon(1e-9));
  const TwoQubitState prod = product(qubit_from_bloch(Vec3(0.3, 0.1, -0.5)), qubit_from_bloch(Vec3(0, 0.7, 0)));
  CHECK(mutual_information(prod) < 1e-12);
  CHECK_THROWS(von_neumann_entropy(Eigen::MatrixXcd::Identity(3, 3)));
}

TEST_CASE("partial_trace") {
  CHECK(max_abs_diff(partial_trace(bell(BellKind::psi_minus), Side::A), 0.5 * Mat2c::Identity()) < 1e-15);
  CHECK(max_abs_diff(partial_trace(bell(BellKind::psi_minus), Side::B), 0.5 * Mat2c::Identity()) < 1e-15);
  Mat2c zero = Mat2c::Zero();
  zero(0, 0) = 1.0;
  CHECK(max_abs_diff(partial_trace(basis_state(0, 0), Side::A), zero) < 1e-15);
  CHECK(max_abs_diff(partial_trace(rho_b(0.2, 0.4), Side::A), qubit_from_bloch(Vec3(0, 0, 0.4))) < 1e-14);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const TwoQubitState rho = random_state(seed, 4);
    const BlochRep rep = to_bloch(rho);
    CHECK(max_abs_diff(qubit_bloch(partial_trace(rho, Side::A)), rep.a) < 1e-12);
    CHECK(max_abs_diff(qubit_bloch(partial_trace(rho, Side::B)), rep.b) < 1e-12);
  }
}

TEST_CASE("concurrence") {
  CHECK(concurrence(rho_b(0.2, 0.4)) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(concurrence(werner(1.0 / 3.0)) < 1e-12);
  CHECK(concurrence(werner(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(concurrence(werner(0.5)) == doctest::Approx(0.25).epsilon(1e-12));

  // max(0, (3 lambda - 1)/2) on a 50-point grid.
  for (int i = 0; i < 50; ++i) {
    const double lambda = i / 49.0;
    CHECK(std::abs(concurrence(werner(lambda)) - std::max(0.0, (3 * lambda - 1) / 2)) <= 1e-9);
  }
  // Pure states: C = 2 |ad - bc| for |psi> = a|00> + b|01> + c|10> + d|11>.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const TwoQubitState pure = random_state(100 + seed, 1);
    Eigen::SelfAdjointEigenSolver<Mat4c> es(pure.matrix());
    const Eigen::Vector4cd psi = es.eigenvectors().col(3);
    CHECK(concurrence(pure) == doctest::Approx(2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2))).epsilon(1e-9));
  }
}

TEST_CASE("local-unitary covariance") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const TwoQubitState rho = random_state(seed, 1 + static_cast<int>(seed % 4));
    const Mat3 oa = random_rotation(2 * seed + 11), ob = random_rotation(2 * seed + 12);
    const TwoQubitState moved = apply_local_rotation(rho, oa, ob);
    const BlochRep before = to_bloch(rho), after = to_bloch(moved);
    CHECK(max_abs_diff(after.a, oa * before.a) <= 1e-9);
    CHECK(max_abs_diff(after.b, ob * before.b) <= 1e-9);
    CHECK(max_abs_diff(after.E, oa * before.E * ob.transpose()) <= 1e-9);
    CHECK(std::abs(purity(moved) - purity(rho)) <= 1e-9);
    CHECK(std::abs(von_neumann_entropy(moved.matrix()) - von_neumann_entropy(rho.matrix())) <= 1e-9);
    CHECK(std::abs(mutual_information(moved) - mutual_information(rho)) <= 1e-9);
    CHECK(std::abs(concurrence(moved) - concurrence(rho)) <= 1e-9);
    CHECK(max_abs_diff(schmidt_canonical(after.E).singular_values, schmidt_canonical(before.E).singular_values) <=
          1e-9);
  }
}

}  // TEST_SUITE
