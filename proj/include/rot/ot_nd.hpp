#pragma once

#include <cstddef>
#include <vector>

#include "rot/measures.hpp"

namespace rot {

/// Square matrix of nonnegative finite transport costs, row-major.
class CostMatrix {
 public:
  CostMatrix(std::size_t n, std::vector<double> entries);
  /// Non-square inputs are rejected.
  static CostMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return c_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> c_;
};

/// ||x_i - y_j||^p for all pairs; rows are filled in parallel.
CostMatrix pairwise_cost(const SampleMatrix& x, const SampleMatrix& y, double p);

struct Assignment {
  std::vector<std::size_t> perm;  // row i is matched to column perm[i]
  double cost = 0.0;
};

/// Minimum-cost perfect matching by shortest augmenting paths, O(n^3).
/// Equal-cost candidates are resolved toward the lowest column index.
Assignment hungarian(const CostMatrix& cost);

/// W_p^p between the uniform empirical measures of two equal-size clouds.
double exact_wp(const SampleMatrix& x, const SampleMatrix& y, double p);

}  // namespace rot
