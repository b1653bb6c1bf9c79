#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace eparam {

struct NelderMeadOptions {
  int max_iters = 2000;
  /// Converged when max - min of the simplex values drops below this.
  double f_tol = 1e-8;
  /// Edge length of the initial axis-aligned simplex.
  double initial_step = 0.5;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free simplex minimization (standard reflection / expansion /
/// contraction / shrink coefficients 1, 2, 1/2, 1/2).
template <typename F>
NelderMeadResult nelder_mead(F&& f, const Eigen::VectorXd& x0, const NelderMeadOptions& opt) {
  const Eigen::Index n = x0.size();
  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  NelderMeadResult res;
  for (Eigen::Index i = 0; i < n; ++i) pts[i + 1](i) += opt.initial_step;
  for (Eigen::Index i = 0; i <= n; ++i) vals[i] = f(pts[i]);
  res.evaluations = static_cast<int>(n + 1);

  std::vector<int> order(n + 1);
  Eigen::VectorXd centroid(n), xr(n), xe(n), xc(n);
  for (res.iterations = 0; res.iterations < opt.max_iters; ++res.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order.front();
    const int worst = order.back();
    const int second = order[n - 1];
    if (vals[worst] - vals[best] <= opt.f_tol) {
      res.converged = true;
      break;
    }

    centroid.setZero();
    for (Eigen::Index i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= static_cast<double>(n);

    xr = centroid + (centroid - pts[worst]);
    const double fr = f(xr);
    ++res.evaluations;
    if (fr < vals[best]) {
      xe = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(xe);
      ++res.evaluations;
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    xc = outside ? centroid + 0.5 * (xr - centroid) : centroid + 0.5 * (pts[worst] - centroid);
    const double fc = f(xc);
    ++res.evaluations;
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      vals[i] = f(pts[i]);
      ++res.evaluations;
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  res.value = *it;
  res.x = pts[static_cast<std::size_t>(it - vals.begin())];
  return res;
}

}  // namespace eparam
