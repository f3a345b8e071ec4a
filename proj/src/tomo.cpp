#include "qcorr/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

namespace qcorr {

namespace {

constexpr std::array<int, 4> kSignA = {1, 1, -1, -1};
constexpr std::array<int, 4> kSignB = {1, -1, 1, -1};

std::uint64_t setting_seed(std::uint64_t seed, int k, int l, std::uint64_t component) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(3 * (k - 1) + (l - 1)), static_cast<std::uint32_t>(component),
                    0x7030u};
  std::mt19937_64 g(seq);
  return g();
}

void require_setting(int k, int l) {
  if (k < 1 || k > 3 || l < 1 || l > 3) throw std::invalid_argument("Pauli setting indices must be in 1..3");
}

std::uint64_t draw_poisson(std::mt19937_64& rng, double mean) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(rng);
}

}  // namespace

OutcomeProbabilities measurement_probabilities(const TwoQubitState& rho, int k, int l) {
  require_setting(k, l);
  const BlochRep rep = to_bloch(rho);
  OutcomeProbabilities p{};
  for (std::size_t i = 0; i < 4; ++i) {
    const double v = 0.25 * (1.0 + kSignA[i] * rep.a(k - 1) + kSignB[i] * rep.b(l - 1) +
                             kSignA[i] * kSignB[i] * rep.E(k - 1, l - 1));
    p[i] = std::max(v, 0.0);
  }
  return p;
}

CountRecord sample_counts(int k, int l, const OutcomeProbabilities& probs, double mean_total, std::uint64_t seed) {
  require_setting(k, l);
  if (!(mean_total >= 0.0)) throw std::invalid_argument("sample_counts: mean_total must be >= 0");
  std::mt19937_64 rng(seed);
  CountRecord rec{k, l, {}};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(probs[i] >= 0.0)) throw std::invalid_argument("sample_counts: probabilities must be >= 0");
    rec.counts[i] = draw_poisson(rng, mean_total * probs[i]);
  }
  return rec;
}

std::vector<CountRecord> measure_state(const TwoQubitState& rho, double mean_total, std::uint64_t seed) {
  return mixture_by_duration({{rho, 1.0}}, mean_total, seed);
}

Reconstruction linear_inversion(const std::vector<CountRecord>& records) {
  std::array<const CountRecord*, 9> by_setting{};
  for (const auto& r : records) {
    require_setting(r.k, r.l);
    by_setting[static_cast<std::size_t>(3 * (r.k - 1) + (r.l - 1))] = &r;
  }
  BlochRep rep;
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 3; ++l) {
      const CountRecord* r = by_setting[static_cast<std::size_t>(3 * (k - 1) + (l - 1))];
      if (r == nullptr)
        throw MissingSettingError("missing setting (" + std::to_string(k) + "," + std::to_string(l) + ")");
      const double n = static_cast<double>(r->total());
      if (n <= 0.0)
        throw EmptyCountsError("no counts for setting (" + std::to_string(k) + "," + std::to_string(l) + ")");
      double sa = 0.0, sb = 0.0, sab = 0.0;
      for (std::size_t i = 0; i < 4; ++i) {
        const double f = static_cast<double>(r->counts[i]) / n;
        sa += kSignA[i] * f;
        sb += kSignB[i] * f;
        sab += kSignA[i] * kSignB[i] * f;
      }
      rep.a(k - 1) += sa / 3.0;
      rep.b(l - 1) += sb / 3.0;
      rep.E(k - 1, l - 1) = sab;
    }

  Mat4c m = bloch_matrix(rep);
  m = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat4c> es(m);
  const double min_ev = es.eigenvalues().minCoeff();
  if (min_ev >= 0.0) return {TwoQubitState(m), false, min_ev};

  Vec4 ev = es.eigenvalues().cwiseMax(0.0);
  ev /= ev.sum();
  Mat4c repaired = es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return {TwoQubitState(0.5 * (repaired + repaired.adjoint())), true, min_ev};
}

std::vector<CountRecord> mixture_by_duration(const std::vector<std::pair<TwoQubitState, double>>& components,
                                             double mean_rate, std::uint64_t seed) {
  if (components.empty()) throw std::invalid_argument("mixture_by_duration: no components");
  if (!(mean_rate >= 0.0)) throw std::invalid_argument("mixture_by_duration: mean_rate must be >= 0");
  double total = 0.0;
  for (const auto& [_, w] : components) {
    if (!(w >= 0.0)) throw std::invalid_argument("mixture_by_duration: weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("mixture_by_duration: weights sum to zero");

  std::vector<CountRecord> out;
  out.reserve(9);
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 3; ++l) {
      CountRecord acc{k, l, {}};
      for (std::size_t c = 0; c < components.size(); ++c) {
        const auto& [state, w] = components[c];
        const CountRecord part = sample_counts(k, l, measurement_probabilities(state, k, l),
                                               mean_rate * w / total, setting_seed(seed, k, l, c));
        for (std::size_t i = 0; i < 4; ++i) acc.counts[i] += part.counts[i];
      }
      out.push_back(acc);
    }
  return out;
}

TwoQubitState perturb_local_rotation(const TwoQubitState& rho, const Vec3& axis, double angle) {
  if (!axis.allFinite() || axis.norm() == 0.0) throw std::invalid_argument("rotation axis must be nonzero");
  const Mat3 r = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
  return apply_local_rotation(rho, Mat3::Identity(), r);
}

void write_counts_csv(std::ostream& os, const std::vector<CountRecord>& records) {
  os << "k,l,n_pp,n_pm,n_mp,n_mm\n";
  for (const auto& r : records)
    os << r.k << ',' << r.l << ',' << r.counts[0] << ',' << r.counts[1] << ',' << r.counts[2] << ','
       << r.counts[3] << '\n';
}

std::vector<CountRecord> read_counts_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("k,l,n_pp,n_pm,n_mp,n_mm", 0) != 0)
    throw std::invalid_argument("counts CSV: missing header k,l,n_pp,n_pm,n_mp,n_mm");
  std::vector<CountRecord> out;
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    CountRecord r;
    std::array<long long, 4> raw{};
    if (!(ls >> r.k >> r.l >> raw[0] >> raw[1] >> raw[2] >> raw[3]))
      throw std::invalid_argument("counts CSV: malformed row '" + line + "'");
    require_setting(r.k, r.l);
    for (std::size_t i = 0; i < 4; ++i) {
      if (raw[i] < 0) throw std::invalid_argument("counts CSV: negative count in row '" + line + "'");
      r.counts[i] = static_cast<std::uint64_t>(raw[i]);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace qcorr
