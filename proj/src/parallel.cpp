#include "rot/parallel.hpp"

#include <omp.h>

namespace rot {

namespace {

double tree_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return tree_sum(v, half) + tree_sum(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) { return tree_sum(values.data(), values.size()); }

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double population_variance(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double m = mean(values);
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double c = values[i] - m;
    sq[i] = c * c;
  }
  return pairwise_sum(sq) / static_cast<double>(values.size());
}

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
  if (n >= 1) omp_set_num_threads(n);
}

ThreadLimit::ThreadLimit(int n) : previous_(omp_get_max_threads()) { set_threads(n); }
ThreadLimit::~ThreadLimit() { omp_set_num_threads(previous_); }

}  // namespace rot
