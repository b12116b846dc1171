#pragma once

// Brute-force and independent-route oracles used only by the tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

/// Minimum over all permutations of sum_i cost[i][perm[i]].
inline double assignment_min(const std::vector<std::vector<double>>& cost) {
  std::vector<std::size_t> perm(cost.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += cost[i][perm[i]];
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// (1/n) min over permutations of sum |x_i - y_perm(i)|^p (unsorted inputs fine).
inline double wp_by_permutations(const std::vector<double>& x, const std::vector<double>& y, double p) {
  std::vector<std::vector<double>> c(x.size(), std::vector<double>(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) c[i][j] = std::pow(std::abs(x[i] - y[j]), p);
  return assignment_min(c) / static_cast<double>(x.size());
}

/// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol, int depth = 50) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        const double delta = left + right - whole;
        if (d <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, d - 1) + rec(mid, hi, fmid, frm, fhi, right, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), depth);
}

/// Golden-section minimization of a unimodal function on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b, double tol = 1e-14) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  while (b - a > tol) {
    if (f(c) < f(d)) b = d; else a = c;
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  return 0.5 * (a + b);
}

struct DirectEot {
  double value;
  std::vector<double> coupling;
};

/// Log-domain Sinkhorn with cost c/eps solved directly at regularization eps
/// (no rescaling). Returns the primal value of the final coupling.
inline DirectEot direct_eps_sinkhorn(const std::vector<std::vector<double>>& xs, const std::vector<double>& w,
                                     const std::vector<std::vector<double>>& ys, const std::vector<double>& v,
                                     double eps, int iters = 200000, double tol = 1e-13) {
  const std::size_t n = xs.size(), m = ys.size();
  std::vector<double> c(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < xs[i].size(); ++k) s += (xs[i][k] - ys[j][k]) * (xs[i][k] - ys[j][k]);
      c[i * m + j] = 0.5 * s;
    }
  std::vector<double> f(n, 0.0), g(m, 0.0), tmp;
  auto lse = [](const std::vector<double>& a) {
    const double mx = *std::max_element(a.begin(), a.end());
    double s = 0.0;
    for (double t : a) s += std::exp(t - mx);
    return mx + std::log(s);
  };
  for (int it = 0; it < iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      tmp.assign(m, 0.0);
      for (std::size_t j = 0; j < m; ++j) tmp[j] = std::log(v[j]) + (g[j] - c[i * m + j]) / eps;
      f[i] = -eps * lse(tmp);
    }
    for (std::size_t j = 0; j < m; ++j) {
      tmp.assign(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = std::log(w[i]) + (f[i] - c[i * m + j]) / eps;
      g[j] = -eps * lse(tmp);
    }
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < m; ++j) r += w[i] * v[j] * std::exp((f[i] + g[j] - c[i * m + j]) / eps);
      err += std::abs(r - w[i]);
    }
    if (err < tol) break;
  }
  DirectEot out;
  out.coupling.resize(n * m);
  out.value = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double pij = w[i] * v[j] * std::exp((f[i] + g[j] - c[i * m + j]) / eps);
      out.coupling[i * m + j] = pij;
      if (pij > 0.0) out.value += c[i * m + j] * pij + eps * pij * std::log(pij / (w[i] * v[j]));
    }
  return out;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline std::vector<double> random_weights(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& x : w) s += (x = u(rng));
  for (auto& x : w) x /= s;
  // absorb rounding into the largest weight so the sum is 1 to ~1e-16
  double t = 0.0;
  for (std::size_t i = 1; i < n; ++i) t += w[i];
  w[0] = 1.0 - t;
  return w;
}

}  // namespace oracle
