#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "conelab/errors.hpp"
#include "conelab/vec.hpp"

namespace conelab {

struct NelderMeadOptions {
  int max_iters = 200;
  double step = 0.08;      // initial simplex edge
  double f_tol = 1e-13;    // stop when the simplex f-spread shrinks below this
  double x_tol = 1e-11;    // ... or the vertex spread does
  bool record_trace = false;
};

struct NelderMeadResult {
  Vec best_x;
  double best_f = 0.0;
  int iterations = 0;
  std::vector<std::pair<Vec, double>> trace;  // best vertex per iteration
};

// Plain Nelder-Mead simplex descent (reflection 1, expansion 2, contraction
// 1/2, shrink 1/2). Deterministic; the objective may be noisy/piecewise
// smooth, which is why no gradients are assumed.
template <typename F>
NelderMeadResult nelder_mead(F&& f, const Vec& x0, const NelderMeadOptions& opt = {}) {
  const int n = x0.dim();
  if (n < 1) throw InvalidInput("nelder_mead: need at least one variable");

  std::vector<Vec> xs;
  std::vector<double> fs;
  xs.reserve(n + 1);
  xs.push_back(x0);
  for (int k = 0; k < n; ++k) {
    Vec x = x0;
    x[k] += opt.step;
    xs.push_back(x);
  }
  for (const Vec& x : xs) fs.push_back(f(x));

  NelderMeadResult out;
  auto order = [&]() {
    for (std::size_t i = 1; i < xs.size(); ++i)
      for (std::size_t j = i; j > 0 && fs[j] < fs[j - 1]; --j) {
        std::swap(fs[j], fs[j - 1]);
        std::swap(xs[j], xs[j - 1]);
      }
  };
  order();

  int it = 0;
  for (; it < opt.max_iters; ++it) {
    if (opt.record_trace) out.trace.emplace_back(xs[0], fs[0]);
    double spread_f = fs[n] - fs[0];
    double spread_x = 0.0;
    for (int k = 1; k <= n; ++k) spread_x = std::max(spread_x, distance(xs[k], xs[0]));
    if (spread_f <= opt.f_tol && spread_x <= opt.x_tol) break;

    Vec centroid(n);
    for (int k = 0; k < n; ++k) centroid += xs[k];
    centroid *= 1.0 / static_cast<double>(n);

    Vec xr = centroid + 1.0 * (centroid - xs[n]);
    double fr = f(xr);
    if (fr < fs[0]) {
      Vec xe = centroid + 2.0 * (centroid - xs[n]);
      double fe = f(xe);
      if (fe < fr) {
        xs[n] = xe;
        fs[n] = fe;
      } else {
        xs[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      xs[n] = xr;
      fs[n] = fr;
    } else {
      Vec xc = centroid + 0.5 * (xs[n] - centroid);
      double fc = f(xc);
      if (fc < fs[n]) {
        xs[n] = xc;
        fs[n] = fc;
      } else {
        for (int k = 1; k <= n; ++k) {
          xs[k] = xs[0] + 0.5 * (xs[k] - xs[0]);
          fs[k] = f(xs[k]);
        }
      }
    }
    order();
  }

  out.best_x = xs[0];
  out.best_f = fs[0];
  out.iterations = it;
  return out;
}

}  // namespace conelab
