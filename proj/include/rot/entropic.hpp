#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rot/measures.hpp"

namespace rot {

/// Iteration controls for the unit-regularization solver.
struct SinkhornOptions {
  std::size_t max_iter = 100000;
  double tol = 1e-9;  // L1 marginal violation, both sides combined
};

struct SinkhornConfig {
  double eps = 1.0;
  std::size_t max_iter = 100000;
  double tol = 1e-9;

  SinkhornOptions options() const { return {max_iter, tol}; }
  void validate() const;
};

/// Entropic OT solution for the quadratic cost |x - y|^2 / 2.
/// Potentials are anchored so that phi[0] == 0.
struct SinkhornSolution {
  std::vector<double> phi;
  std::vector<double> psi;
  std::vector<double> coupling;  // rows x cols, row-major
  std::vector<double> source_weights;
  std::vector<double> target_weights;
  std::size_t rows = 0, cols = 0;
  double value = 0.0;  // dual objective
  double marginal_err = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double eps = 1.0;

  double pi(std::size_t i, std::size_t j) const { return coupling[i * cols + j]; }
};

/// |a - b|^2 / 2
double quadratic_cost(std::span<const double> a, std::span<const double> b);

/// Log-domain Sinkhorn at unit regularization. Stops when the L1 marginal
/// violation drops below tol; otherwise returns with converged = false.
SinkhornSolution sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const SinkhornOptions& opts = {});

/// sum c_ij pi_ij + eps sum pi_ij log(pi_ij / (w_i v_j)), with 0 log 0 = 0.
double eot_primal_value(std::span<const double> coupling, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                        double eps);

/// sum w phi + sum v psi - eps sum w v exp((phi + psi - c) / eps) + eps.
double eot_dual_value(std::span<const double> phi, std::span<const double> psi, const DiscreteMeasure& mu,
                      const DiscreteMeasure& nu, double eps);

/// Largest |sum_j v_j exp((phi_i + psi_j - c_ij)/eps) - 1| over rows and columns.
double optimality_residual(const SinkhornSolution& sol, const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Entropic OT at regularization eps by rescaling the atoms by eps^{-1/2},
/// solving at unit scale, and scaling value and potentials by eps.
SinkhornSolution eot_with_eps(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double eps,
                              const SinkhornOptions& opts = {});

struct EotVariances {
  double v1 = 0.0;  // Var of phi over the source sample
  double v2 = 0.0;  // Var of psi over the target sample (or under nu)
};

/// Population variances of the potentials at each sample's atom. With an
/// empty target index the psi variance is taken under the target weights.
EotVariances eot_variances(const SinkhornSolution& sol, std::span<const std::size_t> x_atom_of,
                           std::span<const std::size_t> y_atom_of);

struct EotEstimate {
  double value = 0.0;
  SinkhornSolution solution;
  double v1 = 0.0;
  std::optional<double> v2;  // two-sample only
};

/// Plug-in S^eps(mu_n, nu) against a fixed reference measure.
EotEstimate eot_estimate(const SampleMatrix& x, const DiscreteMeasure& nu, const SinkhornConfig& config);

/// Plug-in S^eps(mu_n, nu_n) with both variance terms.
EotEstimate eot_estimate(const SampleMatrix& x, const SampleMatrix& y, const SinkhornConfig& config);

}  // namespace rot
