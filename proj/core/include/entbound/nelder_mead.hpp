#pragma once

#include <functional>
#include <span>
#include <vector>

namespace entbound {

struct NelderMeadOptions {
  /// Iteration 1 evaluates the start point only; each later iteration is one simplex step.
  int max_iterations = 2000;
  /// Stop once max f - min f over the simplex falls below this.
  double tolerance = 1e-10;
  /// Edge length of the initial axis-aligned simplex.
  double initial_step = 0.5;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Minimizes f from x0. Non-finite objective values are treated as +inf.
NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x0,
                                      const NelderMeadOptions& options = {});

}  // namespace entbound
