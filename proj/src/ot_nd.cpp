#include "rot/ot_nd.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rot/error.hpp"
#include "rot/ot1d.hpp"

namespace rot {

CostMatrix::CostMatrix(std::size_t n, std::vector<double> entries) : n_(n), c_(std::move(entries)) {
  if (n_ == 0) throw InputError("CostMatrix: empty");
  if (c_.size() != n_ * n_) throw InputError("CostMatrix: must be square");
  for (double v : c_)
    if (!std::isfinite(v) || v < 0.0) throw InputError("CostMatrix: entries must be finite and >= 0");
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> c;
  c.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw InputError("CostMatrix: must be square");
    c.insert(c.end(), r.begin(), r.end());
  }
  return CostMatrix(n, std::move(c));
}

CostMatrix pairwise_cost(const SampleMatrix& x, const SampleMatrix& y, double p) {
  if (x.rows() != y.rows()) throw InputError("pairwise_cost: clouds differ in size");
  if (x.dim() != y.dim()) throw InputError("pairwise_cost: clouds differ in dimension");
  if (!(p >= 1.0)) throw InputError("Wasserstein order p must be >= 1");
  const std::size_t n = x.rows(), d = x.dim();
  std::vector<double> c(n * n);
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto xi = x.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto yj = y.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double t = xi[k] - yj[k];
        s += t * t;
      }
      c[i * n + j] = p == 2.0 ? s : cost_pow(std::sqrt(s), p);
    }
  }
  return CostMatrix(n, std::move(c));
}

Assignment hungarian(const CostMatrix& cost) {
  const std::size_t n = cost.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based arrays; column 0 is the virtual source of each augmenting path.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {  // strict: lowest column wins ties
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.perm.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) out.perm[match[j] - 1] = j - 1;
  for (std::size_t i = 0; i < n; ++i) out.cost += cost(i, out.perm[i]);
  return out;
}

double exact_wp(const SampleMatrix& x, const SampleMatrix& y, double p) {
  if (x.rows() != y.rows() || x.dim() != y.dim())
    throw InputError("exact_wp: shapes differ (" + std::to_string(x.rows()) + "x" + std::to_string(x.dim()) +
                     " vs " + std::to_string(y.rows()) + "x" + std::to_string(y.dim()) + ")");
  const auto a = hungarian(pairwise_cost(x, y, p));
  return a.cost / static_cast<double>(x.rows());
}

}  // namespace rot
