#pragma once

#include <span>
#include <vector>

#include "rot/measures.hpp"

namespace rot {

/// |a - b|^p with the p = 1, 2 cases done without pow.
double cost_pow(double diff, double p);

/// Kantorovich potentials on the atoms of two equal-size uniform measures.
/// phi[i] belongs to the i-th smallest source atom, psi[j] to the j-th
/// smallest target atom; phi[0] == 0.
struct DualPotentials1D {
  std::vector<double> phi;
  std::vector<double> psi;
  double value = 0.0;  // W_p^p
  double p = 2.0;
};

/// W_p^p between two discrete measures via their quantile functions,
/// integrated exactly over the merged cumulative-weight breakpoints.
double wp_quantile(const Discrete1D& mu, const Discrete1D& nu, double p);

/// W_1 as the L1 distance between the two CDFs, exact on the merged atom grid.
double w1_cdf(const Discrete1D& mu, const Discrete1D& nu);

/// (1/n) sum |x_(i) - y_(i)|^p for sorted equal-length samples.
double wp_order_stats(std::span<const double> x, std::span<const double> y, double p);

/// min_i |x_i - y|^p - phi_i over the source atoms.
double c_transform(std::span<const double> phi, const Discrete1D& source, double y, double p);

/// Potentials along the monotone coupling x_(i) <-> y_(i), for p > 1.
/// Throws NumericalError if the result is not dual feasible.
DualPotentials1D dual_potentials_1d(std::span<const double> x, std::span<const double> y, double p);

/// Largest violation max_{i,j} (phi_i + psi_j - |x_i - y_j|^p), computed in
/// O(n log n) from the monotone structure of convex costs on the line.
double max_dual_violation(std::span<const double> x, std::span<const double> y,
                          std::span<const double> phi, std::span<const double> psi, double p);

}  // namespace rot
