#include "rot/entropic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rot/error.hpp"
#include "rot/parallel.hpp"

namespace rot {

void SinkhornConfig::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("Sinkhorn: eps must be > 0");
  if (!(tol > 0.0)) throw InputError("Sinkhorn: tol must be > 0");
  if (max_iter == 0) throw InputError("Sinkhorn: max_iter must be >= 1");
}

double quadratic_cost(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return 0.5 * s;
}

namespace {

std::vector<double> cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim()) throw InputError("entropic OT: measures differ in dimension");
  const std::size_t n = mu.size(), m = nu.size();
  std::vector<double> c(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) c[i * m + j] = quadratic_cost(mu.points().row(i), nu.points().row(j));
  return c;
}

// log sum_k exp(a_k), max-stabilized
double log_sum_exp(std::span<const double> a) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : a) mx = std::max(mx, v);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double v : a) s += std::exp(v - mx);
  return mx + std::log(s);
}


// Past this many sweeps Sinkhorn is usually in its slow regime
// (rate about 1 - exp(-cost gap)); Newton on the dual finishes the job.
constexpr std::size_t kSweepsBeforeNewton = 2000;
constexpr std::size_t kNewtonMaxSize = 1500;
constexpr std::size_t kNewtonSteps = 60;

double total_violation(std::span<const double> c, std::span<const double> w, std::span<const double> v,
                       std::span<const double> phi, std::span<const double> psi, std::vector<double>& pi) {
  const std::size_t n = w.size(), m = v.size();
  pi.resize(n * m);
  std::vector<double> col(m, 0.0);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double pij = w[i] * v[j] * std::exp(phi[i] + psi[j] - c[i * m + j]);
      pi[i * m + j] = pij;
      r += pij;
      col[j] += pij;
    }
    err += std::abs(r - w[i]);
  }
  for (std::size_t j = 0; j < m; ++j) err += std::abs(col[j] - v[j]);
  return err;
}

double dual_objective(std::span<const double> c, std::span<const double> w, std::span<const double> v,
                      std::span<const double> phi, std::span<const double> psi) {
  const std::size_t n = w.size(), m = v.size();
  double lin = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) lin += w[i] * phi[i];
  for (std::size_t j = 0; j < m; ++j) lin += v[j] * psi[j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) mass += w[i] * v[j] * std::exp(phi[i] + psi[j] - c[i * m + j]);
  return lin - mass + 1.0;
}

// Damped Newton ascent on the concave dual with phi[0] held fixed. Returns the
// number of steps taken; err receives the final two-sided L1 violation.
std::size_t newton_polish(std::span<const double> c, std::span<const double> w, std::span<const double> v, std::vector<double>& phi,
                          std::vector<double>& psi, double tol, double& err) {
  const std::size_t n = w.size(), m = v.size(), dim = n + m - 1;
  std::vector<double> pi;
  err = total_violation(c, w, v, phi, psi, pi);
  std::size_t steps = 0;
  for (; steps < kNewtonSteps && err >= tol; ++steps) {
    // unknowns: phi[1..n-1], psi[0..m-1]
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    const auto fi = [](std::size_t i) { return static_cast<Eigen::Index>(i - 1); };
    const auto gj = [n](std::size_t j) { return static_cast<Eigen::Index>(n - 1 + j); };
    std::vector<double> col(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double pij = pi[i * m + j];
        r += pij;
        col[j] += pij;
        if (i > 0) {
          h(fi(i), gj(j)) = pij;
          h(gj(j), fi(i)) = pij;
        }
      }
      if (i > 0) {
        h(fi(i), fi(i)) = r;
        g(fi(i)) = w[i] - r;
      }
    }
    for (std::size_t j = 0; j < m; ++j) {
      h(gj(j), gj(j)) = col[j];
      g(gj(j)) = v[j] - col[j];
    }
    // the Hessian is only semidefinite up to rounding when the plan is nearly
    // deterministic, so use a pivoted LU rather than LDLT
    const Eigen::VectorXd d = h.fullPivLu().solve(g);
    if (!d.allFinite()) break;
    const double base = dual_objective(c, w, v, phi, psi);
    const double slope = g.dot(d);
    double t = 1.0;
    std::vector<double> nphi(phi), npsi(psi);
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
      for (std::size_t i = 1; i < n; ++i) nphi[i] = phi[i] + t * d(fi(i));
      for (std::size_t j = 0; j < m; ++j) npsi[j] = psi[j] + t * d(gj(j));
      if (dual_objective(c, w, v, nphi, npsi) >= base + 1e-4 * t * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    phi.swap(nphi);
    psi.swap(npsi);
    err = total_violation(c, w, v, phi, psi, pi);
  }
  return steps;
}

}  // namespace

SinkhornSolution sinkhorn(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const SinkhornOptions& opts) {
  if (!(opts.tol > 0.0)) throw InputError("Sinkhorn: tol must be > 0");
  const std::size_t n = mu.size(), m = nu.size();
  const auto c = cost_matrix(mu, nu);
  const auto w = mu.weights(), v = nu.weights();
  std::vector<double> logw(n), logv(m);
  for (std::size_t i = 0; i < n; ++i) logw[i] = std::log(w[i]);
  for (std::size_t j = 0; j < m; ++j) logv[j] = std::log(v[j]);

  SinkhornSolution sol;
  sol.rows = n;
  sol.cols = m;
  sol.phi.assign(n, 0.0);
  sol.psi.assign(m, 0.0);
  std::vector<double> buf(std::max(n, m));
  double err = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  const std::size_t sweeps_before_newton =
      n + m - 1 <= kNewtonMaxSize ? std::min(opts.max_iter, kSweepsBeforeNewton) : opts.max_iter;
  bool newton_done = false;
  while (it < opts.max_iter) {
    if (it == sweeps_before_newton && !newton_done) {
      newton_done = true;
      it += newton_polish(c, w, v, sol.phi, sol.psi, opts.tol, err);
      if (err < opts.tol) break;
      continue;
    }
    ++it;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) buf[j] = logv[j] + sol.psi[j] - c[i * m + j];
      sol.phi[i] = -log_sum_exp({buf.data(), m});
    }
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < n; ++i) buf[i] = logw[i] + sol.phi[i] - c[i * m + j];
      sol.psi[j] = -log_sum_exp({buf.data(), n});
    }
    // columns are exact after the psi update; measure the row violation
    err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < m; ++j) r += v[j] * std::exp(sol.phi[i] + sol.psi[j] - c[i * m + j]);
      err += w[i] * std::abs(r - 1.0);
    }
    if (err < opts.tol) break;
  }
  sol.iterations = it;

  const double anchor = sol.phi[0];
  for (double& x : sol.phi) x -= anchor;
  for (double& x : sol.psi) x += anchor;

  sol.coupling.resize(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double pij = w[i] * v[j] * std::exp(sol.phi[i] + sol.psi[j] - c[i * m + j]);
      sol.coupling[i * m + j] = pij < 1e-300 ? 0.0 : pij;
    }
  double merr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < m; ++j) r += sol.coupling[i * m + j];
    merr += std::abs(r - w[i]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += sol.coupling[i * m + j];
    merr += std::abs(s - v[j]);
  }
  sol.marginal_err = merr;
  sol.converged = err < opts.tol;
  sol.source_weights.assign(w.begin(), w.end());
  sol.target_weights.assign(v.begin(), v.end());
  sol.eps = 1.0;
  sol.value = eot_dual_value(sol.phi, sol.psi, mu, nu, 1.0);
  return sol;
}

double eot_primal_value(std::span<const double> coupling, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                        double eps) {
  const std::size_t n = mu.size(), m = nu.size();
  if (coupling.size() != n * m) throw InputError("eot_primal_value: coupling shape mismatch");
  const auto c = cost_matrix(mu, nu);
  double transport = 0.0, kl = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double pij = coupling[i * m + j];
      if (pij < 0.0) throw InputError("eot_primal_value: negative coupling entry");
      if (pij == 0.0) continue;
      const double ref = mu.weights()[i] * nu.weights()[j];
      if (!(ref > 0.0)) throw InputError("eot_primal_value: coupling not absolutely continuous (KL = +inf)");
      transport += c[i * m + j] * pij;
      kl += pij * std::log(pij / ref);
    }
  return transport + eps * kl;
}

double eot_dual_value(std::span<const double> phi, std::span<const double> psi, const DiscreteMeasure& mu,
                      const DiscreteMeasure& nu, double eps) {
  const std::size_t n = mu.size(), m = nu.size();
  const auto c = cost_matrix(mu, nu);
  const auto w = mu.weights(), v = nu.weights();
  double lin = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) lin += w[i] * phi[i];
  for (std::size_t j = 0; j < m; ++j) lin += v[j] * psi[j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) mass += w[i] * v[j] * std::exp((phi[i] + psi[j] - c[i * m + j]) / eps);
  return lin - eps * mass + eps;
}

double optimality_residual(const SinkhornSolution& sol, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const std::size_t n = mu.size(), m = nu.size();
  const auto c = cost_matrix(mu, nu);
  const double eps = sol.eps;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      r += nu.weights()[j] * std::exp((sol.phi[i] + sol.psi[j] - c[i * m + j]) / eps);
    worst = std::max(worst, std::abs(r - 1.0));
  }
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += mu.weights()[i] * std::exp((sol.phi[i] + sol.psi[j] - c[i * m + j]) / eps);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

SinkhornSolution eot_with_eps(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double eps,
                              const SinkhornOptions& opts) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("eot_with_eps: eps must be > 0");
  if (eps == 1.0) return sinkhorn(mu, nu, opts);
  const double s = 1.0 / std::sqrt(eps);
  auto scaled = [s](const DiscreteMeasure& m) {
    std::vector<double> pts(m.points().data().begin(), m.points().data().end());
    for (double& x : pts) x *= s;
    return DiscreteMeasure(SampleMatrix(m.size(), m.dim(), std::move(pts)),
                           std::vector<double>(m.weights().begin(), m.weights().end()));
  };
  auto sol = sinkhorn(scaled(mu), scaled(nu), opts);
  for (double& x : sol.phi) x *= eps;
  for (double& x : sol.psi) x *= eps;
  sol.value *= eps;
  sol.eps = eps;
  return sol;
}

EotVariances eot_variances(const SinkhornSolution& sol, std::span<const std::size_t> x_atom_of,
                           std::span<const std::size_t> y_atom_of) {
  if (!sol.converged) throw NumericalError("eot_variances: Sinkhorn did not converge");
  auto gather = [](const std::vector<double>& pot, std::span<const std::size_t> idx) {
    std::vector<double> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] >= pot.size()) throw InputError("eot_variances: atom index out of range");
      out[i] = pot[idx[i]];
    }
    return out;
  };
  EotVariances out;
  if (!x_atom_of.empty()) {
    out.v1 = population_variance(gather(sol.phi, x_atom_of));
  } else {
    double m = 0.0, s = 0.0;
    for (std::size_t i = 0; i < sol.rows; ++i) m += sol.source_weights[i] * sol.phi[i];
    for (std::size_t i = 0; i < sol.rows; ++i) s += sol.source_weights[i] * (sol.phi[i] - m) * (sol.phi[i] - m);
    out.v1 = s;
  }
  if (!y_atom_of.empty()) {
    out.v2 = population_variance(gather(sol.psi, y_atom_of));
  } else {
    double m = 0.0, s = 0.0;
    for (std::size_t j = 0; j < sol.cols; ++j) m += sol.target_weights[j] * sol.psi[j];
    for (std::size_t j = 0; j < sol.cols; ++j) s += sol.target_weights[j] * (sol.psi[j] - m) * (sol.psi[j] - m);
    out.v2 = s;
  }
  return out;
}

EotEstimate eot_estimate(const SampleMatrix& x, const DiscreteMeasure& nu, const SinkhornConfig& config) {
  config.validate();
  auto atoms = empirical_atoms(x);
  EotEstimate est;
  est.solution = eot_with_eps(atoms.measure, nu, config.eps, config.options());
  if (!est.solution.converged)
    throw NumericalError("Sinkhorn did not converge within " + std::to_string(config.max_iter) + " iterations");
  est.value = est.solution.value;
  est.v1 = eot_variances(est.solution, atoms.atom_of, {}).v1;
  return est;
}

EotEstimate eot_estimate(const SampleMatrix& x, const SampleMatrix& y, const SinkhornConfig& config) {
  config.validate();
  auto ax = empirical_atoms(x);
  auto ay = empirical_atoms(y);
  EotEstimate est;
  est.solution = eot_with_eps(ax.measure, ay.measure, config.eps, config.options());
  if (!est.solution.converged)
    throw NumericalError("Sinkhorn did not converge within " + std::to_string(config.max_iter) + " iterations");
  est.value = est.solution.value;
  const auto var = eot_variances(est.solution, ax.atom_of, ay.atom_of);
  est.v1 = var.v1;
  est.v2 = var.v2;
  return est;
}

}  // namespace rot
