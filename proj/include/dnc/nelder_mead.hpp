#pragma once

// Budgeted Nelder-Mead simplex minimization. The objective is never called more than
// `max_evals` times; when the budget runs out mid-iteration the best point seen so far
// is returned.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace dnc {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
  std::size_t max_evals = 1000;
  double initial_step = 0.25;
  double f_tolerance = 1e-10;  // converged when the simplex values spread less than this...
  double x_tolerance = 1e-8;   // ...and its vertices lie this close to the best one
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = std::numeric_limits<double>::infinity();
  std::size_t evals = 0;
  bool converged = false;
};

inline NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opts) {
  NelderMeadResult res;
  res.x = x0;
  const std::size_t dim = x0.size();

  auto eval = [&](const std::vector<double>& x, double& out) -> bool {
    if (res.evals >= opts.max_evals) return false;
    out = f(x);
    ++res.evals;
    if (out < res.f) {
      res.f = out;
      res.x = x;
    }
    return true;
  };

  std::vector<std::vector<double>> simplex(dim + 1, x0);
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) {
    if (i > 0) simplex[i][i - 1] += opts.initial_step;
    if (!eval(simplex[i], values[i])) return res;
  }
  if (dim == 0) {
    res.converged = true;
    return res;
  }

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  auto blend = [&](const std::vector<double>& a, const std::vector<double>& b, double t, std::vector<double>& out) {
    for (std::size_t j = 0; j < dim; ++j) out[j] = a[j] + t * (b[j] - a[j]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const auto best = order.front();
    const auto worst = order.back();
    const auto second = order[dim - 1];

    double spread = values[worst] - values[best];
    double size = 0.0;
    for (std::size_t i = 0; i <= dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) size = std::max(size, std::abs(simplex[i][j] - simplex[best][j]));
    }
    if (spread < opts.f_tolerance && size < opts.x_tolerance) {
      res.converged = true;
      return res;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j] / static_cast<double>(dim);
    }

    double fr = 0.0;
    blend(centroid, simplex[worst], -1.0, trial);  // reflection
    if (!eval(trial, fr)) return res;
    if (fr < values[best]) {
      double fe = 0.0;
      blend(centroid, simplex[worst], -2.0, trial2);  // expansion
      if (!eval(trial2, fe)) return res;
      if (fe < fr) {
        simplex[worst] = trial2;
        values[worst] = fe;
      } else {
        simplex[worst] = trial;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = trial;
      values[worst] = fr;
      continue;
    }
    double fc = 0.0;
    if (fr < values[worst]) {
      blend(centroid, simplex[worst], -0.5, trial2);  // outside contraction
    } else {
      blend(centroid, simplex[worst], 0.5, trial2);  // inside contraction
    }
    if (!eval(trial2, fc)) return res;
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = trial2;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= dim; ++i) {  // shrink towards the best vertex
      if (i == best) continue;
      blend(simplex[best], simplex[i], 0.5, simplex[i]);
      if (!eval(simplex[i], values[i])) return res;
    }
  }
}

}  // namespace dnc
