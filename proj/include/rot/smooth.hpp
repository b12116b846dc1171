#pragma once

#include <cstddef>
#include <vector>

#include "rot/measures.hpp"

namespace rot {

/// Standard mollifier scaled to bandwidth sigma:
///   pdf(x) = exp(-1 / (1 - |x/sigma|^2)) / (C sigma^d)  for |x| < sigma, else 0.
/// The normalizer and radial moments are integrated once at construction
/// (the kernel is radial, so every integral reduces to one dimension).
class MollifierKernel {
 public:
  MollifierKernel(double sigma, std::size_t d);

  double sigma() const { return sigma_; }
  std::size_t dim() const { return d_; }
  double support_radius() const { return sigma_; }
  /// C = integral of exp(-1/(1-|x|^2)) over the unit ball of R^d.
  double normalizer() const { return normalizer_; }

  double pdf(std::span<const double> x) const;
  double max_pdf() const;

  /// E|X|^p for X drawn from the unit-bandwidth kernel.
  double unit_moment(double p) const;

 private:
  double sigma_;
  std::size_t d_;
  double normalizer_;
};

/// Surface area of S^{d-1} (2 for d = 1).
double sphere_area(std::size_t d);

/// m i.i.d. kernel draws by rejection from the uniform law on B(0, sigma).
/// Draws are produced in fixed-size chunks with one random stream per chunk.
SampleMatrix sample_kernel(const MollifierKernel& kernel, std::size_t m, const SeedPolicy& seed);

/// independent: fresh draws for both clouds. shared: y_i gets the draw of x_i.
/// coupled: y_{pi(i)} gets the draw of x_i, pi an optimal matching of the
/// unperturbed clouds, so every rep is at most the unsmoothed W_p.
enum class NoiseSharing { independent, shared, coupled };

struct SmoothEstimate {
  double value = 0.0;               // mean over reps of W_p (not W_p^p)
  std::vector<double> rep_values;   // W_p per rep
  double rep_sd = 0.0;              // population sd of rep_values
  /// 3 sd / sqrt(r)
  double mc_error() const;
};

/// Smooth W_p between the empirical measures of x and y: each rep perturbs
/// every point by fresh kernel noise and solves the exact assignment problem.
SmoothEstimate smooth_wp(const SampleMatrix& x, const SampleMatrix& y, const MollifierKernel& kernel, double p,
                         std::size_t reps, const SeedPolicy& seed,
                         NoiseSharing sharing = NoiseSharing::coupled);

/// Closed ball {x : |x - center| <= radius}.
struct Ball {
  std::vector<double> center;
  double radius = 0.0;
  bool contains(std::span<const double> x) const;
};

template <class Measure>
struct Truncated {
  Measure measure;
  double mass;  // mu(A)
};

/// Conditional measure mu(. | A); throws when mu(A) = 0.
Truncated<Discrete1D> truncate(const Discrete1D& m, const Ball& a);
Truncated<DiscreteMeasure> truncate(const DiscreteMeasure& m, const Ball& a);

/// (1/mass - 1) diam^p, an upper bound on W_p^p(mu|_A, mu) for compactly
/// supported mu with support diameter diam.
double truncation_bound(double p, double mass, double diam);

}  // namespace rot
