#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rot/measures.hpp"

namespace rot {

struct DirectionValue {
  Direction direction;
  double value;  // W_p^p of the projections
};

struct SlicedEstimate {
  double value = 0.0;  // average or maximum of per_direction values
  std::vector<DirectionValue> per_direction;
  std::size_t k = 0;
};

/// Directions whose value is within `delta` of the maximum.
struct ArgmaxSet {
  std::vector<Direction> directions;
  double delta = 0.0;
};

struct MaxSlicedConfig {
  std::vector<Direction> directions;  // Monte Carlo starting set
  double refine_tol = 1e-12;          // smallest improvement accepted
  double initial_step = 0.25;
  double min_step = 1e-7;
  std::size_t max_rounds = 2000;
  double argmax_rel_tol = 1e-6;  // delta = argmax_rel_tol * max(1, max value)
};

/// Asymptotic variances: v2 for the source sample, w2 for the target sample
/// in the two-sample design.
struct VarianceEstimate {
  double v2 = 0.0;
  std::optional<double> w2;
  double total() const { return v2 + w2.value_or(0.0); }
};

enum class Design { one_sample, two_sample };

/// W_p^p of the projections on every direction. Equal sample counts use the
/// order-statistics formula, unequal counts the quantile integral.
/// Directions are processed in parallel; output order matches input.
std::vector<double> per_direction_wp(const SampleMatrix& x, const SampleMatrix& y, double p,
                                     std::span<const Direction> directions);

SlicedEstimate avg_sliced_wp(const SampleMatrix& x, const SampleMatrix& y, double p,
                             std::span<const Direction> directions);

/// Per-direction W_1 via CDF differences, averaged.
SlicedEstimate avg_sliced_w1(const SampleMatrix& x, const SampleMatrix& y,
                             std::span<const Direction> directions);

/// Maximum over the Monte Carlo directions, then greedy coordinate refinement
/// of the best one. Every evaluated direction is reported in per_direction.
std::pair<SlicedEstimate, ArgmaxSet> max_sliced_wp(const SampleMatrix& x, const SampleMatrix& y, double p,
                                                   const MaxSlicedConfig& config);

/// Var of the direction-averaged OT potential over the source sample (and of
/// the averaged c-transform potential over the target sample when two-sample).
/// Requires p > 1 and equal sample counts.
VarianceEstimate variance_vp(const SampleMatrix& x, const SampleMatrix& y, double p,
                             std::span<const Direction> directions, Design design = Design::two_sample);

/// Per-sample direction-averaged potentials used by variance_vp.
struct AveragedPotentials {
  std::vector<double> source;  // one per row of x
  std::vector<double> target;  // one per row of y
};
AveragedPotentials averaged_potentials(const SampleMatrix& x, const SampleMatrix& y, double p,
                                       std::span<const Direction> directions);

struct TGridConfig {
  std::size_t intervals = 2000;  // grid step = pooled range / intervals
};

/// Projected reference measure: CDF and an effective support interval per
/// direction index.
struct ProjectedReference {
  std::function<double(std::size_t, double)> cdf;
  std::function<std::pair<double, double>(std::size_t)> support;
};

/// v_1^2 from the sign-integral influence function, one-sample design.
VarianceEstimate variance_v1_sign(const SampleMatrix& x, const ProjectedReference& nu,
                                  std::span<const Direction> directions, const TGridConfig& grid = {});

/// Two-sample v_1^2 and w_1^2 with both CDFs empirical.
VarianceEstimate variance_v1_sign(const SampleMatrix& x, const SampleMatrix& y,
                                  std::span<const Direction> directions, const TGridConfig& grid = {});

int sign_of(double v);

}  // namespace rot
