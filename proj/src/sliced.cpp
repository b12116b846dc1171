#include "rot/sliced.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rot/error.hpp"
#include "rot/ot1d.hpp"
#include "rot/parallel.hpp"

namespace rot {

namespace {

void check_pair(const SampleMatrix& x, const SampleMatrix& y, std::span<const Direction> dirs) {
  if (dirs.empty()) throw InputError("sliced: empty direction set");
  if (x.dim() != y.dim()) throw InputError("sliced: samples differ in dimension");
  for (const auto& d : dirs)
    if (d.dim() != x.dim()) throw InputError("sliced: direction dimension does not match samples");
}

struct SortedProjection {
  std::vector<double> values;     // sorted
  std::vector<std::size_t> rank;  // rank[i] = position of sample i in values
};

SortedProjection sorted_projection(const SampleMatrix& s, const Direction& theta) {
  auto raw = project_values(s, theta);
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return raw[a] < raw[b]; });
  SortedProjection out;
  out.values.resize(raw.size());
  out.rank.resize(raw.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    out.values[r] = raw[order[r]];
    out.rank[order[r]] = r;
  }
  return out;
}

double direction_wp(const SampleMatrix& x, const SampleMatrix& y, double p, const Direction& theta) {
  auto px = project_values(x, theta);
  auto py = project_values(y, theta);
  if (px.size() == py.size()) {
    std::sort(px.begin(), px.end());
    std::sort(py.begin(), py.end());
    return wp_order_stats(px, py, p);
  }
  return wp_quantile(Discrete1D::uniform(std::move(px)), Discrete1D::uniform(std::move(py)), p);
}

SlicedEstimate average_of(std::span<const Direction> dirs, std::vector<double> vals) {
  SlicedEstimate est;
  est.k = dirs.size();
  est.value = mean(vals);
  est.per_direction.reserve(dirs.size());
  for (std::size_t j = 0; j < dirs.size(); ++j) est.per_direction.push_back({dirs[j], vals[j]});
  return est;
}

// Mean over directions of per-direction per-sample terms, terms[j * n + i].
std::vector<double> average_columns(const std::vector<double>& terms, std::size_t k, std::size_t n) {
  std::vector<double> out(n), col(k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) col[j] = terms[j * n + i];
    out[i] = pairwise_sum(col) / static_cast<double>(k);
  }
  return out;
}

}  // namespace

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

std::vector<double> per_direction_wp(const SampleMatrix& x, const SampleMatrix& y, double p,
                                     std::span<const Direction> directions) {
  check_pair(x, y, directions);
  if (!(p >= 1.0)) throw InputError("Wasserstein order p must be >= 1");
  std::vector<double> vals(directions.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long long jj = 0; jj < static_cast<long long>(directions.size()); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    vals[j] = direction_wp(x, y, p, directions[j]);
  }
  return vals;
}

SlicedEstimate avg_sliced_wp(const SampleMatrix& x, const SampleMatrix& y, double p,
                             std::span<const Direction> directions) {
  return average_of(directions, per_direction_wp(x, y, p, directions));
}

SlicedEstimate avg_sliced_w1(const SampleMatrix& x, const SampleMatrix& y,
                             std::span<const Direction> directions) {
  check_pair(x, y, directions);
  std::vector<double> vals(directions.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long long jj = 0; jj < static_cast<long long>(directions.size()); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    vals[j] = w1_cdf(project(x, directions[j]), project(y, directions[j]));
  }
  return average_of(directions, std::move(vals));
}

std::pair<SlicedEstimate, ArgmaxSet> max_sliced_wp(const SampleMatrix& x, const SampleMatrix& y, double p,
                                                   const MaxSlicedConfig& config) {
  const auto& start = config.directions;
  auto vals = per_direction_wp(x, y, p, start);

  SlicedEstimate est;
  est.per_direction.reserve(start.size());
  for (std::size_t j = 0; j < start.size(); ++j) est.per_direction.push_back({start[j], vals[j]});

  std::size_t best_idx = 0;
  for (std::size_t j = 1; j < vals.size(); ++j)
    if (vals[j] > vals[best_idx]) best_idx = j;
  std::vector<double> best(start[best_idx].components().begin(), start[best_idx].components().end());
  double best_val = vals[best_idx];

  const std::size_t d = x.dim();
  if (d >= 2) {
    double step = config.initial_step;
    for (std::size_t round = 0; round < config.max_rounds && step >= config.min_step; ++round) {
      bool improved = false;
      for (std::size_t c = 0; c < d; ++c) {
        for (double s : {1.0, -1.0}) {
          auto cand = best;
          cand[c] += s * step;
          double nrm = 0.0;
          for (double v : cand) nrm += v * v;
          if (!(nrm > 0.0)) continue;
          Direction dir = Direction::normalized(cand);
          const double v = direction_wp(x, y, p, dir);
          est.per_direction.push_back({dir, v});
          if (v > best_val + config.refine_tol) {
            best_val = v;
            best.assign(dir.components().begin(), dir.components().end());
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }

  double max_val = -std::numeric_limits<double>::infinity();
  for (const auto& dv : est.per_direction) max_val = std::max(max_val, dv.value);
  est.value = max_val;
  est.k = est.per_direction.size();

  ArgmaxSet arg;
  arg.delta = config.argmax_rel_tol * std::max(1.0, max_val);
  for (const auto& dv : est.per_direction)
    if (dv.value >= max_val - arg.delta) arg.directions.push_back(dv.direction);
  return {std::move(est), std::move(arg)};
}

AveragedPotentials averaged_potentials(const SampleMatrix& x, const SampleMatrix& y, double p,
                                       std::span<const Direction> directions) {
  check_pair(x, y, directions);
  if (p == 1.0)
    throw InputError("variance_vp: p = 1 has no potential recursion; use variance_v1_sign");
  if (!(p > 1.0)) throw InputError("variance_vp: requires p > 1");
  if (x.rows() != y.rows()) throw InputError("variance_vp: requires equal sample counts");
  const std::size_t n = x.rows(), k = directions.size();
  std::vector<double> phi_terms(k * n), psi_terms(k * n);
  parallel_for(k, [&](std::size_t j) {
    const auto sx = sorted_projection(x, directions[j]);
    const auto sy = sorted_projection(y, directions[j]);
    const auto pot = dual_potentials_1d(sx.values, sy.values, p);
    for (std::size_t i = 0; i < n; ++i) {
      phi_terms[j * n + i] = pot.phi[sx.rank[i]];
      psi_terms[j * n + i] = pot.psi[sy.rank[i]];
    }
  });
  return {average_columns(phi_terms, k, n), average_columns(psi_terms, k, n)};
}

VarianceEstimate variance_vp(const SampleMatrix& x, const SampleMatrix& y, double p,
                             std::span<const Direction> directions, Design design) {
  const auto pot = averaged_potentials(x, y, p, directions);
  VarianceEstimate out;
  out.v2 = population_variance(pot.source);
  if (design == Design::two_sample) out.w2 = population_variance(pot.target);
  return out;
}

namespace {

struct GridSigns {
  double lo = 0.0, step = 0.0;
  std::vector<double> suffix;  // suffix[k] = sum_{k' >= k} s_k'
};

// h * sum_t s(t) (1{v <= t} - F_own(t)) for each projected value v.
std::vector<double> influence_terms(std::span<const double> raw_values,
                                    const GridSigns& g, std::span<const double> own_cdf_on_grid,
                                    std::span<const int> signs) {
  const std::size_t nt = signs.size();
  double sf = 0.0;
  for (std::size_t k = 0; k < nt; ++k) sf += signs[k] * own_cdf_on_grid[k];
  std::vector<double> out(raw_values.size());
  if (g.step == 0.0) return out;
  for (std::size_t i = 0; i < raw_values.size(); ++i) {
    // first grid point t_k = lo + k*step with t_k >= v
    double kf = std::ceil((raw_values[i] - g.lo) / g.step);
    std::size_t kstar = kf <= 0.0 ? 0 : static_cast<std::size_t>(kf);
    while (kstar > 0 && g.lo + static_cast<double>(kstar - 1) * g.step >= raw_values[i]) --kstar;
    while (kstar < nt && g.lo + static_cast<double>(kstar) * g.step < raw_values[i]) ++kstar;
    const double above = kstar < nt ? g.suffix[kstar] : 0.0;
    out[i] = g.step * (above - sf);
  }
  return out;
}

std::vector<double> cdf_on_grid(std::span<const double> sorted, double lo, double step, std::size_t nt) {
  std::vector<double> f(nt);
  std::size_t c = 0;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = lo + static_cast<double>(k) * step;
    while (c < sorted.size() && sorted[c] <= t) ++c;
    f[k] = static_cast<double>(c) / n;
  }
  return f;
}

GridSigns make_signs(double lo, double step, std::span<const int> signs) {
  GridSigns g;
  g.lo = lo;
  g.step = step;
  g.suffix.assign(signs.size() + 1, 0.0);
  for (std::size_t k = signs.size(); k-- > 0;) g.suffix[k] = g.suffix[k + 1] + signs[k];
  return g;
}

struct DirectionInfluence {
  std::vector<double> source;
  std::vector<double> target;
};

DirectionInfluence direction_influence(const SampleMatrix& x, const SampleMatrix* y, const ProjectedReference* ref,
                                       std::size_t j, const Direction& theta, std::size_t intervals) {
  auto raw_x = project_values(x, theta);
  auto sx = raw_x;
  std::sort(sx.begin(), sx.end());
  std::vector<double> raw_y, sy;
  double lo = sx.front(), hi = sx.back();
  if (y) {
    raw_y = project_values(*y, theta);
    sy = raw_y;
    std::sort(sy.begin(), sy.end());
    lo = std::min(lo, sy.front());
    hi = std::max(hi, sy.back());
  } else {
    const auto [rlo, rhi] = ref->support(j);
    lo = std::min(lo, rlo);
    hi = std::max(hi, rhi);
  }
  const double step = (hi - lo) / static_cast<double>(intervals);
  const std::size_t nt = intervals;
  const auto fx = cdf_on_grid(sx, lo, step, nt);
  std::vector<double> fy(nt);
  if (y) {
    fy = cdf_on_grid(sy, lo, step, nt);
  } else {
    for (std::size_t k = 0; k < nt; ++k) fy[k] = ref->cdf(j, lo + static_cast<double>(k) * step);
  }
  std::vector<int> s(nt);
  for (std::size_t k = 0; k < nt; ++k) s[k] = sign_of(fx[k] - fy[k]);
  const auto g = make_signs(lo, step, s);
  DirectionInfluence out;
  out.source = influence_terms(raw_x, g, fx, s);
  if (y) out.target = influence_terms(raw_y, g, fy, s);
  return out;
}

VarianceEstimate v1_sign_impl(const SampleMatrix& x, const SampleMatrix* y, const ProjectedReference* ref,
                              std::span<const Direction> directions, const TGridConfig& grid) {
  if (grid.intervals < 1) throw InputError("variance_v1_sign: t grid needs at least 2 points");
  if (directions.empty()) throw InputError("variance_v1_sign: empty direction set");
  for (const auto& d : directions)
    if (d.dim() != x.dim()) throw InputError("variance_v1_sign: direction dimension does not match samples");
  if (y && y->dim() != x.dim()) throw InputError("variance_v1_sign: samples differ in dimension");
  const std::size_t k = directions.size(), n = x.rows(), m = y ? y->rows() : 0;
  std::vector<double> src(k * n), tgt(k * m);
  parallel_for(k, [&](std::size_t j) {
    auto inf = direction_influence(x, y, ref, j, directions[j], grid.intervals);
    std::copy(inf.source.begin(), inf.source.end(), src.begin() + static_cast<std::ptrdiff_t>(j * n));
    if (y) std::copy(inf.target.begin(), inf.target.end(), tgt.begin() + static_cast<std::ptrdiff_t>(j * m));
  });
  VarianceEstimate out;
  out.v2 = population_variance(average_columns(src, k, n));
  if (y) out.w2 = population_variance(average_columns(tgt, k, m));
  return out;
}

}  // namespace

VarianceEstimate variance_v1_sign(const SampleMatrix& x, const ProjectedReference& nu,
                                  std::span<const Direction> directions, const TGridConfig& grid) {
  if (!nu.cdf || !nu.support) throw InputError("variance_v1_sign: reference CDF and support are required");
  return v1_sign_impl(x, nullptr, &nu, directions, grid);
}

VarianceEstimate variance_v1_sign(const SampleMatrix& x, const SampleMatrix& y,
                                  std::span<const Direction> directions, const TGridConfig& grid) {
  return v1_sign_impl(x, &y, nullptr, directions, grid);
}

}  // namespace rot
