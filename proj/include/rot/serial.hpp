#pragma once

// Straightforward single-threaded versions of the OpenMP kernels. They are
// the reference the parallel code is tested and benchmarked against.

#include <span>
#include <vector>

#include "rot/measures.hpp"
#include "rot/ot_nd.hpp"
#include "rot/sliced.hpp"

namespace rot::serial {

std::vector<double> per_direction_wp(const SampleMatrix& x, const SampleMatrix& y, double p,
                                     std::span<const Direction> directions);

/// Left-to-right mean of per_direction_wp.
double avg_sliced_wp(const SampleMatrix& x, const SampleMatrix& y, double p, std::span<const Direction> directions);

CostMatrix pairwise_cost(const SampleMatrix& x, const SampleMatrix& y, double p);

/// Direction-averaged potentials accumulated sample by sample.
VarianceEstimate variance_vp(const SampleMatrix& x, const SampleMatrix& y, double p,
                             std::span<const Direction> directions);

/// Influence terms of the sign integral evaluated by direct double summation
/// over samples and grid points.
VarianceEstimate variance_v1_sign(const SampleMatrix& x, const SampleMatrix& y,
                                  std::span<const Direction> directions, std::size_t intervals = 2000);

}  // namespace rot::serial
