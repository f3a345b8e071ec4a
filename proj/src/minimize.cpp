#include "qcorr/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qcorr {

namespace {

// Standard coefficients (reflection, expansion, contraction, shrink).
constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

SimplexResult nelder_mead(const Objective& f, std::vector<double> x0, const SimplexOptions& opt) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("nelder_mead: empty parameter vector");

  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };

  SimplexResult best{x0, eval(x0), 0};
  double step = opt.initial_step;

  std::vector<std::vector<double>> pts(n + 1);
  std::vector<double> vals(n + 1);
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);

  while (evals < opt.max_evaluations) {
    pts[0] = best.x;
    vals[0] = best.value;
    for (std::size_t i = 0; i < n; ++i) {
      pts[i + 1] = best.x;
      pts[i + 1][i] += step;
      vals[i + 1] = eval(pts[i + 1]);
    }

    while (evals < opt.max_evaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
      const std::size_t lo = order.front(), hi = order.back(), second = order[n - 1];
      if (vals[hi] - vals[lo] <= opt.value_tol) break;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t i = 0; i <= n; ++i)
        if (i != hi)
          for (std::size_t d = 0; d < n; ++d) centroid[d] += pts[i][d] / static_cast<double>(n);

      for (std::size_t d = 0; d < n; ++d) trial[d] = centroid[d] + kReflect * (centroid[d] - pts[hi][d]);
      const double fr = eval(trial);

      if (fr < vals[lo]) {
        for (std::size_t d = 0; d < n; ++d) trial2[d] = centroid[d] + kExpand * (trial[d] - centroid[d]);
        const double fe = eval(trial2);
        if (fe < fr) {
          pts[hi] = trial2;
          vals[hi] = fe;
        } else {
          pts[hi] = trial;
          vals[hi] = fr;
        }
        continue;
      }
      if (fr < vals[second]) {
        pts[hi] = trial;
        vals[hi] = fr;
        continue;
      }
      const bool outside = fr < vals[hi];
      for (std::size_t d = 0; d < n; ++d) {
        const double from = outside ? trial[d] : pts[hi][d];
        trial2[d] = centroid[d] + kContract * (from - centroid[d]);
      }
      const double fc = eval(trial2);
      if (fc < std::min(fr, vals[hi])) {
        pts[hi] = trial2;
        vals[hi] = fc;
        continue;
      }
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == lo) continue;
        for (std::size_t d = 0; d < n; ++d) pts[i][d] = pts[lo][d] + kShrink * (pts[i][d] - pts[lo][d]);
        vals[i] = eval(pts[i]);
      }
    }

    const auto lo = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    const bool improved = vals[lo] < best.value;
    if (vals[lo] <= best.value) {
      best.x = pts[lo];
      best.value = vals[lo];
    }
    // Restart around the incumbent; shrink the step when nothing was gained.
    step = improved ? std::max(step * 0.5, 1e-4) : step * 0.1;
    if (step < 1e-9) break;
  }
  best.evaluations = evals;
  return best;
}

}  // namespace qcorr
