#pragma once
/// \file oracles.hpp
/// Slow reference computations used only to cross-check the fast paths.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "errors.hpp"
#include "models.hpp"

namespace bandit_lb::oracle {

namespace detail {

/// min KL(f, q) over laws q on f's support plus one extra point y with
/// mean(q) = x. Two coordinates are solved from the mass and mean
/// constraints; the rest are found by a zooming grid search.
inline double primal_with_extra_point(const std::vector<double>& pts, const std::vector<double>& w, double x,
                                      double y) {
  std::vector<double> xs = pts;
  std::vector<double> ws = w;
  std::size_t iy = xs.size();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] == y) iy = i;
  if (iy == xs.size()) {
    xs.push_back(y);
    ws.push_back(0.0);
  }
  const std::size_t i0 = static_cast<std::size_t>(std::min_element(xs.begin(), xs.end()) - xs.begin());
  std::vector<std::size_t> free_idx;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (i != i0 && i != iy) free_idx.push_back(i);
  const std::size_t d = free_idx.size();
  constexpr double inf = std::numeric_limits<double>::infinity();

  auto objective = [&](const std::vector<double>& qf) {
    double r = 1.0;
    double s = x;
    for (std::size_t k = 0; k < d; ++k) {
      r -= qf[k];
      s -= xs[free_idx[k]] * qf[k];
    }
    const double qy = (s - xs[i0] * r) / (y - xs[i0]);
    const double q0 = r - qy;
    if (qy < 0.0 || q0 < 0.0) return inf;
    double kl = 0.0;
    auto term = [&](double wi, double qi) {
      if (wi == 0.0) return 0.0;
      if (qi <= 0.0) return inf;
      return wi * std::log(wi / qi);
    };
    kl += term(ws[i0], q0) + term(ws[iy], qy);
    for (std::size_t k = 0; k < d; ++k) kl += term(ws[free_idx[k]], qf[k]);
    return kl;
  };

  if (d == 0) return objective({});

  constexpr int kGrid = 20;
  std::vector<double> lo(d, 0.0), hi(d, 1.0), best(d, 0.0), cur(d);
  double best_val = inf;
  for (int level = 0; level < 40; ++level) {
    std::vector<int> idx(d, 0);
    for (;;) {
      for (std::size_t k = 0; k < d; ++k) cur[k] = lo[k] + (hi[k] - lo[k]) * idx[k] / kGrid;
      const double v = objective(cur);
      if (v < best_val) {
        best_val = v;
        best = cur;
      }
      std::size_t k = 0;
      while (k < d && ++idx[k] > kGrid) idx[k++] = 0;
      if (k == d) break;
    }
    double width = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double step = (hi[k] - lo[k]) / kGrid;
      lo[k] = std::max(0.0, best[k] - 2.0 * step);
      hi[k] = std::min(1.0, best[k] + 2.0 * step);
      width = std::max(width, hi[k] - lo[k]);
    }
    if (width < 1e-12) break;
  }
  return best_val;
}

}  // namespace detail

/// Brute-force primal K_inf for the bounded-support model: the minimum of
/// KL(f, q) over laws q on supp(f) and one extra point y in (x, M] with
/// E(q) = x, scanned over a grid of y that includes M.
inline double k_inf_primal(const Finite& f, double x, int y_steps = 16) {
  const double M = f.ceiling;
  if (x >= M) return std::numeric_limits<double>::infinity();
  if (mean(Distribution{f}) >= x) return 0.0;
  std::vector<double> pts, w;
  for (std::size_t i = 0; i < f.points.size(); ++i)
    if (f.weights[i] > 0.0) {
      pts.push_back(f.points[i]);
      w.push_back(f.weights[i]);
    }
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= y_steps; ++k) {
    const double y = x + (M - x) * k / y_steps;
    best = std::min(best, detail::primal_with_extra_point(pts, w, x, y));
  }
  return best;
}

}  // namespace bandit_lb::oracle
