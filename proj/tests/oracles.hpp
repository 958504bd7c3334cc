#pragma once

// Definition-level reference implementations used as test oracles.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "mcar/rng.hpp"

namespace oracle {

// (1/(n(n-1))) sum_{i != j} x_i r_j - (1/n) sum_i x_i r_i, literally.
inline double t_double_sum(std::span<const double> x, std::span<const double> r) {
  const std::size_t n = x.size();
  double cross = 0.0;
  double diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) cross += x[i] * r[j];
    diag += x[i] * r[i];
  }
  const double nd = static_cast<double>(n);
  return cross / (nd * (nd - 1.0)) - diag / nd;
}

// Same kernel on the zero-filled column y * r_u.
inline double t_hat_double_sum(std::span<const double> y, std::span<const double> r_u,
                               std::span<const double> r_v) {
  std::vector<double> yt(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) yt[i] = r_u[i] != 0.0 ? y[i] * r_u[i] : 0.0;
  return t_double_sum(yt, r_v);
}

// Covariance from the pairwise-difference form: sum_{i<j} (a_i - a_j)(b_i - b_j) / (n(n-1)).
inline double pairwise_cov(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += (a[i] - a[j]) * (b[i] - b[j]);
  return s / (static_cast<double>(n) * static_cast<double>(n - 1));
}

// Composite Simpson on [a, b] with n (even) panels.
template <typename F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Kendall's tau-a, O(n^2).
inline double kendall_tau(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = (a[i] - a[j]) * (b[i] - b[j]);
      s += d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
    }
  return 2.0 * s / (static_cast<double>(n) * static_cast<double>(n - 1));
}

// Kolmogorov-Smirnov distance of a sample from U(0, 1).
inline double ks_uniform(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  const double n = static_cast<double>(p.size());
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    d = std::max(d, static_cast<double>(i + 1) / n - p[i]);
    d = std::max(d, p[i] - static_cast<double>(i) / n);
  }
  return d;
}

// Nelder-Mead minimizer, enough for smooth low-dimensional likelihoods.
template <typename F>
std::vector<double> nelder_mead(F f, std::vector<double> x0, double step, double ftol, int max_iter) {
  const std::size_t d = x0.size();
  std::vector<std::vector<double>> pts(d + 1, x0);
  for (std::size_t k = 0; k < d; ++k) pts[k + 1][k] += step;
  std::vector<double> fv(d + 1);
  for (std::size_t k = 0; k <= d; ++k) fv[k] = f(pts[k]);

  for (int it = 0; it < max_iter; ++it) {
    std::vector<std::size_t> idx(d + 1);
    for (std::size_t k = 0; k <= d; ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    const std::size_t best = idx[0], worst = idx[d], second = idx[d - 1];
    if (std::abs(fv[worst] - fv[best]) < ftol * (std::abs(fv[best]) + 1e-300) && it > 50) break;

    std::vector<double> c(d, 0.0);
    for (std::size_t k = 0; k <= d; ++k)
      if (k != worst)
        for (std::size_t j = 0; j < d; ++j) c[j] += pts[k][j] / static_cast<double>(d);
    auto along = [&](double t) {
      std::vector<double> x(d);
      for (std::size_t j = 0; j < d; ++j) x[j] = c[j] + t * (pts[worst][j] - c[j]);
      return x;
    };
    auto xr = along(-1.0);
    const double fr = f(xr);
    if (fr < fv[best]) {
      auto xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) { pts[worst] = xe; fv[worst] = fe; }
      else { pts[worst] = xr; fv[worst] = fr; }
    } else if (fr < fv[second]) {
      pts[worst] = xr; fv[worst] = fr;
    } else {
      auto xc = along(fr < fv[worst] ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fv[worst])) {
        pts[worst] = xc; fv[worst] = fc;
      } else {
        for (std::size_t k = 0; k <= d; ++k) {
          if (k == best) continue;
          for (std::size_t j = 0; j < d; ++j) pts[k][j] = pts[best][j] + 0.5 * (pts[k][j] - pts[best][j]);
          fv[k] = f(pts[k]);
        }
      }
    }
  }
  const auto it = std::min_element(fv.begin(), fv.end());
  return pts[static_cast<std::size_t>(it - fv.begin())];
}

}  // namespace oracle
