#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include "rot/cli/commands.hpp"
#include "rot/entropic.hpp"
#include "rot/ot1d.hpp"
#include "rot/ot_nd.hpp"
#include "rot/smooth.hpp"

namespace rot::cli {

namespace {

std::vector<double> uniform_draws(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& t : v) t = u(rng);
  return v;
}

// Minimum over all permutations; small n only.
double brute_force_wp(const std::vector<double>& x, const std::vector<double>& y, double p) {
  std::vector<std::size_t> perm(x.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) s += cost_pow(x[i] - y[perm[i]], p);
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(x.size());
}

SelftestRow order_stats_vs_permutations(std::uint64_t seed) {
  SelftestRow row{"order statistics = permutation minimum", 60, 0.0, 1e-12, true};
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < row.instances; ++t) {
    const std::size_t n = 1 + t % 7;
    const double p = 1.0 + static_cast<double>(t % 3);
    auto x = uniform_draws(rng, n, -2, 2), y = uniform_draws(rng, n, -2, 2);
    const double brute = brute_force_wp(x, y, p);
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    row.max_error = std::max(row.max_error, std::abs(wp_order_stats(x, y, p) - brute));
  }
  row.pass = row.max_error <= row.tolerance;
  return row;
}

SelftestRow order_stats_vs_hungarian(std::uint64_t seed) {
  SelftestRow row{"order statistics = Hungarian", 40, 0.0, 1e-10, true};
  std::mt19937_64 rng(seed + 1);
  for (std::size_t t = 0; t < row.instances; ++t) {
    const std::size_t n = 2 + t % 31;
    const double p = 1.0 + static_cast<double>(t % 3);
    auto x = uniform_draws(rng, n, -3, 3), y = uniform_draws(rng, n, -3, 3);
    const double h = exact_wp(SampleMatrix(n, 1, x), SampleMatrix(n, 1, y), p);
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    row.max_error = std::max(row.max_error, std::abs(wp_order_stats(x, y, p) - h));
  }
  row.pass = row.max_error <= row.tolerance;
  return row;
}

std::vector<SelftestRow> dual_checks(std::uint64_t seed) {
  SelftestRow feas{"1D dual feasibility", 60, 0.0, 1e-9, true};
  SelftestRow gap{"1D duality gap", 60, 0.0, 1e-9, true};
  std::mt19937_64 rng(seed + 2);
  for (std::size_t t = 0; t < feas.instances; ++t) {
    const std::size_t n = 1 + t % 32;
    auto x = uniform_draws(rng, n, -1, 1), y = uniform_draws(rng, n, 0, 2);
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const auto pot = dual_potentials_1d(x, y, 2.0);
    feas.max_error = std::max(feas.max_error, std::max(0.0, max_dual_violation(x, y, pot.phi, pot.psi, 2.0)));
    double dual = 0.0;
    for (std::size_t i = 0; i < n; ++i) dual += (pot.phi[i] + pot.psi[i]) / static_cast<double>(n);
    gap.max_error = std::max(gap.max_error, std::abs(dual - wp_order_stats(x, y, 2.0)));
  }
  feas.pass = feas.max_error <= feas.tolerance;
  gap.pass = gap.max_error <= gap.tolerance;
  return {feas, gap};
}

std::vector<SelftestRow> sinkhorn_checks(std::uint64_t seed) {
  SelftestRow marg{"Sinkhorn marginal violation", 20, 0.0, 1e-8, true};
  SelftestRow gap{"Sinkhorn primal-dual gap", 20, 0.0, 1e-9, true};
  std::mt19937_64 rng(seed + 3);
  for (std::size_t t = 0; t < marg.instances; ++t) {
    const std::size_t n = 2 + t % 9, m = 2 + (t * 5) % 11;
    auto w = uniform_draws(rng, n, 0.1, 1), v = uniform_draws(rng, m, 0.1, 1);
    const double sw = std::accumulate(w.begin(), w.end(), 0.0), sv = std::accumulate(v.begin(), v.end(), 0.0);
    for (auto& a : w) a /= sw;
    for (auto& a : v) a /= sv;
    const DiscreteMeasure mu(SampleMatrix(n, 2, uniform_draws(rng, 2 * n, -1, 1)), w);
    const DiscreteMeasure nu(SampleMatrix(m, 2, uniform_draws(rng, 2 * m, -1, 2)), v);
    SinkhornOptions opts;
    opts.tol = 1e-12;
    const auto sol = sinkhorn(mu, nu, opts);
    marg.max_error = std::max(marg.max_error, sol.marginal_err);
    const double primal = eot_primal_value(sol.coupling, mu, nu, 1.0);
    gap.max_error = std::max(gap.max_error, std::abs(primal - sol.value));
  }
  marg.pass = marg.max_error <= marg.tolerance;
  gap.pass = gap.max_error <= gap.tolerance;
  return {marg, gap};
}

SelftestRow sandwich_check(std::uint64_t seed) {
  // Reported error is the largest violation of either inequality beyond the
  // Monte Carlo slack; zero means both held everywhere.
  SelftestRow row{"smooth W2 sandwich", 6, 0.0, 0.0, true};
  std::mt19937_64 rng(seed + 4);
  const std::size_t n = 40, reps = 10;
  for (std::size_t t = 0; t < row.instances; ++t) {
    const double sigma = t % 3 == 0 ? 0.25 : (t % 3 == 1 ? 0.5 : 1.0);
    const SampleMatrix x(n, 2, uniform_draws(rng, 2 * n, 0, 1));
    const SampleMatrix y(n, 2, uniform_draws(rng, 2 * n, 0.3, 1.3));
    const MollifierKernel kernel(sigma, 2);
    const double w = std::sqrt(exact_wp(x, y, 2.0));
    const auto est = smooth_wp(x, y, kernel, 2.0, reps, SeedPolicy(seed).child(t));
    const double slack = est.mc_error();
    const double upper = est.value - (w + slack);
    const double lower = w - (est.value + 2.0 * sigma * std::sqrt(kernel.unit_moment(2.0)) + slack);
    row.max_error = std::max({row.max_error, upper, lower});
  }
  row.pass = row.max_error <= row.tolerance;
  return row;
}

}  // namespace

std::vector<SelftestRow> run_selftest(std::uint64_t seed) {
  std::vector<SelftestRow> rows;
  rows.push_back(order_stats_vs_permutations(seed));
  rows.push_back(order_stats_vs_hungarian(seed));
  for (auto& r : dual_checks(seed)) rows.push_back(r);
  for (auto& r : sinkhorn_checks(seed)) rows.push_back(r);
  rows.push_back(sandwich_check(seed));
  return rows;
}

int cmd_selftest(std::uint64_t seed, std::ostream& out) {
  const auto rows = run_selftest(seed);
  char line[160];
  std::snprintf(line, sizeof line, "%-40s %9s %12s %10s  %s\n", "check", "instances", "max error", "tolerance",
                "result");
  out << line;
  bool ok = true;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-40s %9zu %12.3e %10.1e  %s\n", r.check.c_str(), r.instances, r.max_error,
                  r.tolerance, r.pass ? "PASS" : "FAIL");
    out << line;
    ok = ok && r.pass;
  }
  out << (ok ? "all checks passed\n" : "some checks FAILED\n");
  return ok ? 0 : 1;
}

}  // namespace rot::cli
