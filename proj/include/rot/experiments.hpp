#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "rot/entropic.hpp"
#include "rot/inference.hpp"
#include "rot/measures.hpp"

namespace rot {

/// n i.i.d. draws from a weighted atomic measure.
SampleMatrix sample_discrete(const DiscreteMeasure& m, std::size_t n, std::mt19937_64& rng);

/// n i.i.d. draws, uniform on the box [lo, hi] (coordinate-wise).
SampleMatrix sample_box(std::size_t n, const std::vector<double>& lo, const std::vector<double>& hi,
                        std::mt19937_64& rng);

/// n i.i.d. draws from N(mean, I).
SampleMatrix sample_gaussian(std::size_t n, const std::vector<double>& mean, std::mt19937_64& rng);

/// Five-atom source and target measures in the plane used by the EOT CLT preset.
DiscreteMeasure eot_preset_source();
DiscreteMeasure eot_preset_target();

struct EotCltOptions {
  std::size_t n = 1000;
  std::size_t bootstrap_B = 400;  // 0 disables the bootstrap interval
  double level = 0.95;
  double eps = 1.0;
  double reference_tol = 1e-12;
  double replicate_tol = 1e-10;
};

/// One-sample EOT: S(mu_n, nu) against the population value, standardized by
/// the plug-in Var(phi); coverage of the bootstrap interval.
CltExperiment eot_clt_experiment(const EotCltOptions& opt);

struct SlicedCltOptions {
  std::size_t n = 2000;
  std::size_t k = 300;
  double p = 2.0;
  std::uint64_t direction_seed = 7;
};

/// Two-sample average-sliced W_p^p between U([0,1]^2) and U([1,2]x[0,1]),
/// self-centered, standardized by the plug-in v^2 + w^2.
CltExperiment sliced_boxes_experiment(const SlicedCltOptions& opt);

/// Point mass compared with itself: every statistic and variance is zero.
CltExperiment point_mass_experiment(std::size_t n, std::size_t d);

}  // namespace rot
