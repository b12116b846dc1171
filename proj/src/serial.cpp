#include "rot/serial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rot/error.hpp"
#include "rot/ot1d.hpp"

namespace rot::serial {

namespace {

double variance(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

}  // namespace

std::vector<double> per_direction_wp(const SampleMatrix& x, const SampleMatrix& y, double p,
                                     std::span<const Direction> directions) {
  std::vector<double> out;
  out.reserve(directions.size());
  for (const auto& theta : directions) {
    auto px = project_values(x, theta);
    auto py = project_values(y, theta);
    if (px.size() == py.size()) {
      std::sort(px.begin(), px.end());
      std::sort(py.begin(), py.end());
      double s = 0.0;
      for (std::size_t i = 0; i < px.size(); ++i) s += cost_pow(px[i] - py[i], p);
      out.push_back(s / static_cast<double>(px.size()));
    } else {
      out.push_back(wp_quantile(Discrete1D::uniform(std::move(px)), Discrete1D::uniform(std::move(py)), p));
    }
  }
  return out;
}

double avg_sliced_wp(const SampleMatrix& x, const SampleMatrix& y, double p, std::span<const Direction> directions) {
  if (directions.empty()) throw InputError("sliced: empty direction set");
  double s = 0.0;
  for (double v : serial::per_direction_wp(x, y, p, directions)) s += v;
  return s / static_cast<double>(directions.size());
}

CostMatrix pairwise_cost(const SampleMatrix& x, const SampleMatrix& y, double p) {
  const std::size_t n = x.rows();
  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < x.dim(); ++k) s += (x(i, k) - y(j, k)) * (x(i, k) - y(j, k));
      c[i * n + j] = std::pow(std::sqrt(s), p);
    }
  return CostMatrix(n, std::move(c));
}

VarianceEstimate variance_vp(const SampleMatrix& x, const SampleMatrix& y, double p,
                             std::span<const Direction> directions) {
  const std::size_t n = x.rows();
  std::vector<double> a(n, 0.0), b(n, 0.0);
  for (const auto& theta : directions) {
    const auto px = project_values(x, theta);
    const auto py = project_values(y, theta);
    std::vector<std::size_t> ox(n), oy(n);
    std::iota(ox.begin(), ox.end(), 0);
    std::iota(oy.begin(), oy.end(), 0);
    std::stable_sort(ox.begin(), ox.end(), [&](auto i, auto j) { return px[i] < px[j]; });
    std::stable_sort(oy.begin(), oy.end(), [&](auto i, auto j) { return py[i] < py[j]; });
    bool same = true;
    for (std::size_t r = 0; r < n && same; ++r) same = px[ox[r]] == py[oy[r]];
    if (same) continue;  // zero potentials
    // monotone coupling recursion, written out directly
    double phi = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double psi = cost_pow(px[ox[r]] - py[oy[r]], p) - phi;
      a[ox[r]] += phi;
      b[oy[r]] += psi;
      if (r + 1 < n) phi = cost_pow(px[ox[r + 1]] - py[oy[r]], p) - psi;
    }
  }
  const double k = static_cast<double>(directions.size());
  for (auto& v : a) v /= k;
  for (auto& v : b) v /= k;
  return {variance(a), variance(b)};
}

VarianceEstimate variance_v1_sign(const SampleMatrix& x, const SampleMatrix& y,
                                  std::span<const Direction> directions, std::size_t intervals) {
  const std::size_t n = x.rows(), m = y.rows();
  std::vector<double> hx(n, 0.0), hy(m, 0.0);
  for (const auto& theta : directions) {
    const auto px = project_values(x, theta);
    const auto py = project_values(y, theta);
    const double lo = std::min(*std::min_element(px.begin(), px.end()), *std::min_element(py.begin(), py.end()));
    const double hi = std::max(*std::max_element(px.begin(), px.end()), *std::max_element(py.begin(), py.end()));
    const double h = (hi - lo) / static_cast<double>(intervals);
    if (h == 0.0) continue;
    for (std::size_t k = 0; k < intervals; ++k) {
      const double t = lo + static_cast<double>(k) * h;
      double fx = 0.0, fy = 0.0;
      for (double v : px) fx += v <= t ? 1.0 : 0.0;
      for (double v : py) fy += v <= t ? 1.0 : 0.0;
      fx /= static_cast<double>(n);
      fy /= static_cast<double>(m);
      const double s = fx > fy ? 1.0 : (fx < fy ? -1.0 : 0.0);
      for (std::size_t i = 0; i < n; ++i) hx[i] += h * s * ((px[i] <= t ? 1.0 : 0.0) - fx);
      for (std::size_t j = 0; j < m; ++j) hy[j] += h * s * ((py[j] <= t ? 1.0 : 0.0) - fy);
    }
  }
  const double k = static_cast<double>(directions.size());
  for (auto& v : hx) v /= k;
  for (auto& v : hy) v /= k;
  return {variance(hx), variance(hy)};
}

}  // namespace rot::serial
