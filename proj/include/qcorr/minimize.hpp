#pragma once

// Derivative-free local minimization (Nelder-Mead simplex with restarts on
// collapse) for small smooth unconstrained problems.

#include <functional>
#include <vector>

namespace qcorr {

struct SimplexOptions {
  int max_evaluations = 2000;
  double initial_step = 0.5;
  /// Stop when the spread of simplex values falls below this.
  double value_tol = 1e-13;
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Minimizes f starting from x0. When the simplex collapses before the
/// budget is spent it is rebuilt around the incumbent with a smaller step,
/// which guards against premature convergence on a degenerate simplex.
SimplexResult nelder_mead(const Objective& f, std::vector<double> x0, const SimplexOptions& opt = {});

}  // namespace qcorr
