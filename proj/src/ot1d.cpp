#include "rot/ot1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rot/error.hpp"
#include "rot/parallel.hpp"

namespace rot {

double cost_pow(double diff, double p) {
  const double a = std::abs(diff);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  return std::pow(a, p);
}

namespace {

void check_order(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("Wasserstein order p must be >= 1");
}

void check_sorted(std::span<const double> v, const char* what) {
  if (!std::is_sorted(v.begin(), v.end())) throw InputError(std::string(what) + " must be sorted");
}

}  // namespace

double wp_quantile(const Discrete1D& mu, const Discrete1D& nu, double p) {
  check_order(p);
  const auto a = mu.atoms(), b = nu.atoms();
  const auto ca = mu.cumulative(), cb = nu.cumulative();
  std::size_t i = 0, j = 0;
  double prev = 0.0;
  double total = 0.0;
  while (i < a.size() && j < b.size()) {
    const double next = std::min(ca[i], cb[j]);
    if (next > prev) total += (next - prev) * cost_pow(a[i] - b[j], p);
    prev = std::max(prev, next);
    // both step together on shared breakpoints
    const bool step_a = ca[i] <= next;
    const bool step_b = cb[j] <= next;
    if (step_a) ++i;
    if (step_b) ++j;
  }
  return total;
}

double w1_cdf(const Discrete1D& mu, const Discrete1D& nu) {
  const auto a = mu.atoms(), b = nu.atoms();
  const auto ca = mu.cumulative(), cb = nu.cumulative();
  std::size_t i = 0, j = 0;
  double fa = 0.0, fb = 0.0;
  double t = std::min(a.front(), b.front());
  double total = 0.0;
  while (i < a.size() || j < b.size()) {
    const double next = std::min(i < a.size() ? a[i] : std::numeric_limits<double>::infinity(),
                                 j < b.size() ? b[j] : std::numeric_limits<double>::infinity());
    total += std::abs(fa - fb) * (next - t);
    t = next;
    while (i < a.size() && a[i] == next) fa = ca[i++];
    while (j < b.size() && b[j] == next) fb = cb[j++];
  }
  return total;
}

double wp_order_stats(std::span<const double> x, std::span<const double> y, double p) {
  check_order(p);
  if (x.size() != y.size()) throw InputError("wp_order_stats: samples differ in length");
  if (x.empty()) throw InputError("wp_order_stats: empty samples");
  check_sorted(x, "wp_order_stats: x");
  check_sorted(y, "wp_order_stats: y");
  std::vector<double> terms(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) terms[i] = cost_pow(x[i] - y[i], p);
  return pairwise_sum(terms) / static_cast<double>(x.size());
}

double c_transform(std::span<const double> phi, const Discrete1D& source, double y, double p) {
  check_order(p);
  if (phi.size() != source.size()) throw InputError("c_transform: phi length does not match atoms");
  double best = std::numeric_limits<double>::infinity();
  const auto atoms = source.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) best = std::min(best, cost_pow(atoms[i] - y, p) - phi[i]);
  return best;
}

namespace {

// For each column j compute min_i (c(x_i, y_j) - phi_i). Convex costs on
// sorted supports are Monge, so an argmin can be taken monotone in j and a
// divide-and-conquer over columns touches O(n log n) entries.
void monotone_min(std::span<const double> x, std::span<const double> y, std::span<const double> phi,
                  double p, std::size_t jlo, std::size_t jhi, std::size_t ilo, std::size_t ihi,
                  std::vector<double>& out) {
  if (jlo >= jhi) return;
  const std::size_t jm = jlo + (jhi - jlo) / 2;
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = ilo;
  for (std::size_t i = ilo; i <= ihi; ++i) {
    const double v = cost_pow(x[i] - y[jm], p) - phi[i];
    if (v < best) {
      best = v;
      arg = i;
    }
  }
  out[jm] = best;
  monotone_min(x, y, phi, p, jlo, jm, ilo, arg, out);
  monotone_min(x, y, phi, p, jm + 1, jhi, arg, ihi, out);
}

}  // namespace

double max_dual_violation(std::span<const double> x, std::span<const double> y,
                          std::span<const double> phi, std::span<const double> psi, double p) {
  std::vector<double> ctrans(y.size());
  monotone_min(x, y, phi, p, 0, y.size(), 0, x.size() - 1, ctrans);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < y.size(); ++j) worst = std::max(worst, psi[j] - ctrans[j]);
  return worst;
}

DualPotentials1D dual_potentials_1d(std::span<const double> x, std::span<const double> y, double p) {
  if (!(p > 1.0)) throw InputError("dual_potentials_1d: requires p > 1 (use the sign-integral route for p = 1)");
  if (x.size() != y.size()) throw InputError("dual_potentials_1d: samples differ in length");
  if (x.empty()) throw InputError("dual_potentials_1d: empty samples");
  check_sorted(x, "dual_potentials_1d: x");
  check_sorted(y, "dual_potentials_1d: y");

  const std::size_t n = x.size();
  DualPotentials1D out;
  out.p = p;
  out.phi.resize(n);
  out.psi.resize(n);
  out.value = wp_order_stats(x, y, p);
  // identical samples: the zero pair is optimal, the recursion would not give it
  if (std::equal(x.begin(), x.end(), y.begin())) return out;
  for (std::size_t i = 0; i < n; ++i) {
    out.psi[i] = cost_pow(x[i] - y[i], p) - out.phi[i];
    if (i + 1 < n) out.phi[i + 1] = cost_pow(x[i + 1] - y[i], p) - out.psi[i];
  }

  double scale = 1.0;
  scale = std::max({scale, cost_pow(x.back() - y.front(), p), cost_pow(y.back() - x.front(), p)});
  const double violation = max_dual_violation(x, y, out.phi, out.psi, p);
  if (violation > 1e-9 * scale)
    throw NumericalError("dual_potentials_1d: potentials infeasible by " + std::to_string(violation) +
                         " (n=" + std::to_string(n) + ", p=" + std::to_string(p) + ")");
  return out;
}

}  // namespace rot
