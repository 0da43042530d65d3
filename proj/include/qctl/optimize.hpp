#pragma once

// Small-dimension local minimizers used by the synthesis routines.

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace qctl::opt {

using Vec = std::vector<double>;
using Objective = std::function<double(std::span<const double>)>;
/// Returns f(x) and writes grad f(x) into the second argument.
using ObjectiveWithGradient = std::function<double(std::span<const double>, std::span<double>)>;

struct MinimizeResult {
  Vec x;
  double value = 0.0;
  int evaluations = 0;
  int iterations = 0;
};

struct NelderMeadOptions {
  double initial_step = 0.5;
  int max_evaluations = 4000;
  /// Stop when the spread of simplex values falls below this.
  double f_tol = 1e-13;
  /// Stop early once the best value drops to this level.
  double target = -std::numeric_limits<double>::infinity();
};

/// Adaptive-parameter Nelder-Mead simplex search.
MinimizeResult nelder_mead(const Objective& f, Vec x0, const NelderMeadOptions& options = {});

struct BfgsOptions {
  int max_iterations = 400;
  double gradient_tol = 1e-10;
  double target = -std::numeric_limits<double>::infinity();
};

/// Dense BFGS with backtracking Armijo line search. Never returns a worse point than x0.
MinimizeResult bfgs(const ObjectiveWithGradient& fg, Vec x0, const BfgsOptions& options = {});

}  // namespace qctl::opt
