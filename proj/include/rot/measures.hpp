#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace rot {

/// n observations in R^d, stored row-major. Every entry is finite.
class SampleMatrix {
 public:
  SampleMatrix(std::size_t n, std::size_t d, std::vector<double> data);

  /// Build from rows; all rows must share one length.
  static SampleMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return n_; }
  std::size_t dim() const { return d_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * d_, d_}; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * d_ + j]; }
  std::span<const double> data() const { return data_; }

  /// Rows selected by index, in the given order (indices may repeat).
  SampleMatrix select(std::span<const std::size_t> idx) const;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> data_;
};

/// Sorted weighted atoms on the line. Weights are positive and sum to one
/// within 1e-12; inputs outside that tolerance are rejected.
class Discrete1D {
 public:
  static constexpr double kWeightTol = 1e-12;

  /// Atoms need not be sorted on input; they are sorted together with weights.
  Discrete1D(std::vector<double> atoms, std::vector<double> weights);

  /// Equal weights 1/n; ties are kept as separate atoms.
  static Discrete1D uniform(std::vector<double> atoms);

  std::size_t size() const { return atoms_.size(); }
  std::span<const double> atoms() const { return atoms_; }
  std::span<const double> weights() const { return weights_; }
  /// cumulative()[i] = weights[0] + ... + weights[i]; last entry forced to 1.
  std::span<const double> cumulative() const { return cumulative_; }

 private:
  Discrete1D() = default;
  std::vector<double> atoms_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

/// Weighted point cloud in R^d (entropic OT input).
class DiscreteMeasure {
 public:
  DiscreteMeasure(SampleMatrix points, std::vector<double> weights);
  static DiscreteMeasure uniform(SampleMatrix points);

  std::size_t size() const { return points_.rows(); }
  std::size_t dim() const { return points_.dim(); }
  const SampleMatrix& points() const { return points_; }
  std::span<const double> weights() const { return weights_; }

 private:
  SampleMatrix points_;
  std::vector<double> weights_;
};

/// Empirical measure of a sample with exact-duplicate rows merged into one
/// atom; atom_of[i] is the atom holding row i.
struct EmpiricalAtoms {
  DiscreteMeasure measure;
  std::vector<std::size_t> atom_of;
};
EmpiricalAtoms empirical_atoms(const SampleMatrix& samples);

/// Unit vector on the sphere S^{d-1}.
class Direction {
 public:
  /// Components must already have unit norm within 1e-12.
  explicit Direction(std::vector<double> components);
  /// Rescale an arbitrary nonzero vector to unit length.
  static Direction normalized(std::vector<double> v);

  std::size_t dim() const { return c_.size(); }
  std::span<const double> components() const { return c_; }
  double operator[](std::size_t i) const { return c_[i]; }

 private:
  std::vector<double> c_;
};

/// Reproducible randomness: every stochastic task draws from its own stream,
/// derived from (master_seed, task_index) by a fixed hash. Results therefore
/// do not depend on which thread runs which task.
class SeedPolicy {
 public:
  explicit SeedPolicy(std::uint64_t master_seed) : master_(master_seed) {}

  std::uint64_t master() const { return master_; }
  std::uint64_t sub_seed(std::uint64_t task_index) const;
  std::mt19937_64 stream(std::uint64_t task_index) const;
  /// A child policy for a nested family of tasks.
  SeedPolicy child(std::uint64_t task_index) const { return SeedPolicy(sub_seed(task_index)); }

 private:
  std::uint64_t master_;
};

std::uint64_t splitmix64(std::uint64_t x);

double dot(std::span<const double> a, std::span<const double> b);

/// Empirical measure of {theta^T X_i}: weight 1/n per sample, sorted.
Discrete1D project(const SampleMatrix& samples, const Direction& theta);

/// theta^T X_i in sample order (unsorted).
std::vector<double> project_values(const SampleMatrix& samples, const Direction& theta);

/// Right-continuous CDF: total weight of atoms <= t.
double empirical_cdf(const Discrete1D& m, double t);

/// inf{t : F(t) >= tau} for tau in (0, 1].
double quantile(const Discrete1D& m, double tau);

/// k directions, uniform on S^{d-1}. Direction j depends only on (seed, j).
/// For d = 1 the sphere is {-1, +1}; the pair is repeated to length k.
std::vector<Direction> sample_sphere(std::size_t d, std::size_t k, const SeedPolicy& seed);

}  // namespace rot
