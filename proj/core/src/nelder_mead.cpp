#include "entbound/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace entbound {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vertex {
  std::vector<double> x;
  double f = kInf;
};

}  // namespace

NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x0, const NelderMeadOptions& opt) {
  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isnan(v) ? kInf : v;
  };

  const std::size_t n = x0.size();
  result.value = eval(x0);
  result.x = x0;
  result.iterations = 1;
  if (opt.max_iterations <= 1 || n == 0) return result;

  std::vector<Vertex> simplex(n + 1);
  simplex[0] = {x0, result.value};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = x0;
    x[i] += opt.initial_step;
    simplex[i + 1] = {x, eval(x)};
  }

  auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  std::vector<double> centroid(n), trial(n);

  auto blend = [&](double t, const std::vector<double>& towards, std::vector<double>& out) {
    // out = centroid + t (towards - centroid)
    for (std::size_t i = 0; i < n; ++i) out[i] = centroid[i] + t * (towards[i] - centroid[i]);
  };

  while (result.iterations < opt.max_iterations) {
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    const double spread = simplex.back().f - simplex.front().f;
    if (std::isfinite(spread) && spread < opt.tolerance) {
      result.converged = true;
      break;
    }
    ++result.iterations;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    Vertex& worst = simplex.back();
    const double best_f = simplex.front().f;
    const double second_worst_f = simplex[n - 1].f;

    std::vector<double> reflected(n);
    blend(-opt.reflection, worst.x, reflected);
    const double fr = eval(reflected);

    if (fr < best_f) {
      blend(-opt.reflection * opt.expansion, worst.x, trial);
      const double fe = eval(trial);
      if (fe < fr) {
        worst = {trial, fe};
      } else {
        worst = {reflected, fr};
      }
      continue;
    }
    if (fr < second_worst_f) {
      worst = {reflected, fr};
      continue;
    }
    if (fr < worst.f) {
      // Outside contraction.
      blend(-opt.reflection * opt.contraction, worst.x, trial);
      const double fc = eval(trial);
      if (fc <= fr) {
        worst = {trial, fc};
        continue;
      }
    } else {
      // Inside contraction.
      blend(opt.contraction, worst.x, trial);
      const double fc = eval(trial);
      if (fc < worst.f) {
        worst = {trial, fc};
        continue;
      }
    }
    // Shrink towards the best vertex.
    const std::vector<double> best_x = simplex.front().x;
    for (std::size_t v = 1; v <= n; ++v) {
      for (std::size_t i = 0; i < n; ++i) {
        simplex[v].x[i] = best_x[i] + opt.shrink * (simplex[v].x[i] - best_x[i]);
      }
      simplex[v].f = eval(simplex[v].x);
    }
  }

  std::stable_sort(simplex.begin(), simplex.end(), by_value);
  if (simplex.front().f <= result.value) {
    result.x = simplex.front().x;
    result.value = simplex.front().f;
  }
  return result;
}

}  // namespace entbound
