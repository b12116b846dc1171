#include "rot/inference.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numeric>

#include "rot/error.hpp"
#include "rot/parallel.hpp"

namespace rot {

namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw InputError("confidence level must lie in (0, 1)");
}

SampleMatrix subsample_rows(const SampleMatrix& x, std::size_t m, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(x.rows());
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(m);
  return x.select(idx);
}

// [T - q_{1-a/2}/sqrt(s), T - q_{a/2}/sqrt(s)] from replicates of sqrt(s)(T* - T)
Interval reverse_percentile(double estimate, const std::vector<double>& reps, double scale_n, double level) {
  const double a = 1.0 - level;
  const double root = std::sqrt(scale_n);
  return {estimate - sample_quantile(reps, 1.0 - a / 2.0) / root, estimate - sample_quantile(reps, a / 2.0) / root};
}

}  // namespace

SampleMatrix resample(const SampleMatrix& x, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, x.rows() - 1);
  std::vector<std::size_t> idx(x.rows());
  for (auto& i : idx) i = pick(rng);
  return x.select(idx);
}

double sample_quantile(std::vector<double> values, double alpha) {
  if (values.empty()) throw InputError("sample_quantile: empty sample");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("sample_quantile: alpha must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = alpha * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BootstrapResult bootstrap(const Statistic& stat, const SampleMatrix& x, const SampleMatrix* y, std::size_t B,
                          const SeedPolicy& seed, double level) {
  check_level(level);
  if (B < 2) throw InputError("bootstrap: need B >= 2");
  BootstrapResult out;
  out.level = level;
  out.n = x.rows();
  out.estimate = stat(x, y);
  out.replicates.resize(B);
  const double root = std::sqrt(static_cast<double>(out.n));
  parallel_for(B, [&](std::size_t b) {
    auto rng = seed.stream(b);
    const auto xb = resample(x, rng);
    double t;
    if (y) {
      const auto yb = resample(*y, rng);
      t = stat(xb, &yb);
    } else {
      t = stat(xb, nullptr);
    }
    out.replicates[b] = root * (t - out.estimate);
  });
  out.variance = population_variance(out.replicates);
  out.ci = reverse_percentile(out.estimate, out.replicates, static_cast<double>(out.n), level);
  return out;
}

double SubsampleResult::k(double alpha) const { return sample_quantile(replicates, alpha); }

double SubsampleResult::corrected(double alpha) const {
  return estimate - k(alpha) / std::sqrt(static_cast<double>(n));
}

std::size_t default_subsample_size(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0) - 1e-9));
}

SubsampleResult subsample(const Statistic& stat, const SampleMatrix& x, const SampleMatrix* y, std::size_t m,
                          std::size_t B, const SeedPolicy& seed, double level) {
  check_level(level);
  if (B < 2) throw InputError("subsample: need B >= 2");
  if (m < 1) throw InputError("subsample: m must be >= 1");
  if (m >= x.rows() || (y && m >= y->rows())) throw InputError("subsample: m must be smaller than the sample size");
  SubsampleResult out;
  out.level = level;
  out.m = m;
  out.n = x.rows();
  out.estimate = stat(x, y);
  out.replicates.resize(B);
  const double root = std::sqrt(static_cast<double>(m));
  parallel_for(B, [&](std::size_t b) {
    auto rng = seed.stream(b);
    const auto xs = subsample_rows(x, m, rng);
    double t;
    if (y) {
      const auto ys = subsample_rows(*y, m, rng);
      t = stat(xs, &ys);
    } else {
      t = stat(xs, nullptr);
    }
    out.replicates[b] = root * (t - out.estimate);
  });
  out.variance = population_variance(out.replicates);
  out.ci = reverse_percentile(out.estimate, out.replicates, static_cast<double>(out.n), level);
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("normal_quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(0.0, 1.0), p);
}

Interval normal_ci(double estimate, double v2, std::size_t n, double level) {
  check_level(level);
  if (!(v2 >= 0.0)) throw InputError("normal_ci: variance must be >= 0");
  if (n == 0) throw InputError("normal_ci: n must be >= 1");
  const double half = normal_quantile((1.0 + level) / 2.0) * std::sqrt(v2 / static_cast<double>(n));
  return {estimate - half, estimate + half};
}

double ks_to_standard_normal(std::span<const double> values) {
  if (values.size() < 20) throw InputError("ks_to_standard_normal: need at least 20 values");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double R = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = normal_cdf(v[i]);
    d = std::max({d, static_cast<double>(i + 1) / R - f, f - static_cast<double>(i) / R});
  }
  return std::clamp(d, 0.0, 1.0);
}

CltReport clt_experiment(const CltExperiment& exp, std::size_t R, const SeedPolicy& seed) {
  if (!exp.replicate) throw InputError("clt_experiment: no replication procedure");
  if (exp.n == 0) throw InputError("clt_experiment: n must be >= 1");
  check_level(exp.level);
  CltReport rep;
  rep.name = exp.name;
  rep.n = exp.n;
  rep.R = R;
  rep.level = exp.level;
  rep.reference = exp.reference;
  rep.reference_note = exp.reference_note;
  rep.self_centered = !exp.reference.has_value();

  std::vector<Replication> outcomes(R);
  parallel_for(R, [&](std::size_t r) { outcomes[r] = exp.replicate(seed.child(r)); });

  rep.estimates.resize(R);
  rep.variances.resize(R);
  for (std::size_t r = 0; r < R; ++r) {
    rep.estimates[r] = outcomes[r].estimate;
    rep.variances[r] = outcomes[r].variance;
  }
  const double root = std::sqrt(static_cast<double>(exp.n));
  std::vector<double> scaled(R);
  for (std::size_t r = 0; r < R; ++r) scaled[r] = root * rep.estimates[r];
  rep.replicate_variance = population_variance(scaled);
  rep.mean_plugin_variance = mean(rep.variances);

  const bool all_zero_var = std::all_of(rep.variances.begin(), rep.variances.end(), [](double v) { return !(v > 0.0); });
  if (all_zero_var || R == 0) {
    rep.degenerate = true;
    return rep;
  }

  const double center = exp.reference ? *exp.reference : mean(rep.estimates);
  for (std::size_t r = 0; r < R; ++r) {
    if (!(rep.variances[r] > 0.0)) continue;
    rep.standardized.push_back(root * (rep.estimates[r] - center) / std::sqrt(rep.variances[r]));
  }
  if (rep.standardized.size() >= 20) rep.ks_distance = ks_to_standard_normal(rep.standardized);

  if (exp.reference) {
    std::size_t hits = 0;
    for (std::size_t r = 0; r < R; ++r) {
      const Interval ci = outcomes[r].ci ? *outcomes[r].ci
                                         : normal_ci(rep.estimates[r], rep.variances[r], exp.n, exp.level);
      if (ci.contains(*exp.reference)) ++hits;
    }
    rep.coverage = static_cast<double>(hits) / static_cast<double>(R);
  }
  return rep;
}

}  // namespace rot
