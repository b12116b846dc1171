#pragma once

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

namespace rot {

/// Sum in a fixed pairwise tree. The tree shape depends only on the input
/// length, so the result is identical whatever thread produced the terms.
double pairwise_sum(std::span<const double> values);

double mean(std::span<const double> values);

/// Population variance (divisor n).
double population_variance(std::span<const double> values);

/// Number of OpenMP workers currently allowed (1 when built without OpenMP).
int max_threads();

/// Cap the OpenMP worker count. Values < 1 are ignored.
void set_threads(int n);

/// RAII guard used by tests to run a block with a fixed worker count.
class ThreadLimit {
 public:
  explicit ThreadLimit(int n);
  ~ThreadLimit();
  ThreadLimit(const ThreadLimit&) = delete;
  ThreadLimit& operator=(const ThreadLimit&) = delete;

 private:
  int previous_;
};

/// Run body(i) for i in [0, n) across OpenMP workers. If any call throws,
/// the exception of the lowest failing index is rethrown after the loop.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr error;
  std::size_t error_index = n;
#pragma omp parallel for schedule(dynamic, 1)
  for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    try {
      body(i);
    } catch (...) {
#pragma omp critical(rot_parallel_for_error)
      {
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace rot
