#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rot/measures.hpp"

namespace rot {

/// A plug-in functional T of one or two samples. `y` is null in the
/// one-sample design. Evaluation must be pure and thread-safe.
struct Statistic {
  std::string name;
  std::function<double(const SampleMatrix& x, const SampleMatrix* y)> evaluate;

  double operator()(const SampleMatrix& x, const SampleMatrix* y = nullptr) const { return evaluate(x, y); }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

struct BootstrapResult {
  double estimate = 0.0;            // T on the original data
  std::vector<double> replicates;   // sqrt(n) (T* - T), in replicate order
  Interval ci;                      // reverse-percentile interval for T
  double variance = 0.0;            // population variance of the replicates
  double level = 0.95;
  std::size_t n = 0;                // scaling sample size
};

/// Naive n-out-of-n bootstrap. Replicate b draws from its own stream; in the
/// two-sample design x and y are resampled independently.
BootstrapResult bootstrap(const Statistic& stat, const SampleMatrix& x, const SampleMatrix* y, std::size_t B,
                          const SeedPolicy& seed, double level = 0.95);

struct SubsampleResult {
  double estimate = 0.0;
  std::vector<double> replicates;  // sqrt(m) (T_m - T_n)
  Interval ci;
  double variance = 0.0;
  double level = 0.95;
  std::size_t m = 0;
  std::size_t n = 0;

  /// alpha-quantile of the replicates.
  double k(double alpha) const;
  /// Bias-corrected estimate T_n - k_alpha / sqrt(n).
  double corrected(double alpha) const;
};

/// m-out-of-n subsampling without replacement (valid where the bootstrap is not).
SubsampleResult subsample(const Statistic& stat, const SampleMatrix& x, const SampleMatrix* y, std::size_t m,
                          std::size_t B, const SeedPolicy& seed, double level = 0.95);

/// ceil(n^{2/3})
std::size_t default_subsample_size(std::size_t n);

/// Linear-interpolation (type 7) quantile of an unsorted sample.
double sample_quantile(std::vector<double> values, double alpha);

double normal_cdf(double x);
/// Inverse standard normal CDF.
double normal_quantile(double p);

/// estimate +- z_{(1+level)/2} sqrt(v2 / n)
Interval normal_ci(double estimate, double v2, std::size_t n, double level);

/// sup_t |F_R(t) - Phi(t)| over both one-sided jumps at each sample point.
double ks_to_standard_normal(std::span<const double> values);

/// Outcome of one Monte Carlo replication: the plug-in estimate and its
/// plug-in asymptotic variance; an optional interval (e.g. from a bootstrap)
/// overrides the normal-theory interval used for coverage.
struct Replication {
  double estimate = 0.0;
  double variance = 0.0;
  std::optional<Interval> ci;
};

struct CltExperiment {
  std::string name;
  std::size_t n = 0;
  double level = 0.95;
  std::optional<double> reference;  // population value; none = self-centered mode
  std::string reference_note;
  /// Draw a fresh data set from the population using `seed` and evaluate.
  std::function<Replication(const SeedPolicy& seed)> replicate;
};

struct CltReport {
  std::string name;
  std::size_t n = 0;
  std::size_t R = 0;
  double level = 0.95;
  std::vector<double> estimates;
  std::vector<double> variances;
  std::vector<double> standardized;  // sqrt(n)(T - center)/sqrt(v)
  std::optional<double> ks_distance;
  std::optional<double> coverage;
  std::optional<double> reference;
  std::string reference_note;
  bool self_centered = false;
  bool degenerate = false;
  double replicate_variance = 0.0;     // Var of sqrt(n) T over replications
  double mean_plugin_variance = 0.0;   // mean of the plug-in variances
};

/// Run R independent replications (in parallel, one stream each) and compare
/// the standardized statistics with N(0, 1).
CltReport clt_experiment(const CltExperiment& exp, std::size_t R, const SeedPolicy& seed);

/// Uniform resample with replacement of the rows of x.
SampleMatrix resample(const SampleMatrix& x, std::mt19937_64& rng);

}  // namespace rot
