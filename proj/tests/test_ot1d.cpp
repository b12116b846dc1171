#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rot/error.hpp"
#include "rot/ot1d.hpp"

using namespace rot;

namespace {

Discrete1D point(double a) { return Discrete1D({a}, {1.0}); }

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("wp_quantile examples") {
  CHECK(wp_quantile(point(0), point(2), 2.0) == 4.0);
  const auto u01 = Discrete1D::uniform({0, 1}), u23 = Discrete1D::uniform({2, 3});
  CHECK(wp_quantile(u01, u01, 3.0) == 0.0);
  CHECK(wp_quantile(u01, u23, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(wp_quantile(u01, u23, 0.5), InputError);
}

TEST_CASE("w1_cdf examples") {
  CHECK(w1_cdf(point(0), point(2)) == 2.0);
  const auto m = Discrete1D({0.0, 1.0, 4.0}, {0.2, 0.3, 0.5});
  CHECK(w1_cdf(m, m) == 0.0);
  CHECK(w1_cdf(Discrete1D::uniform({0, 1}), Discrete1D::uniform({2, 3})) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("wp_order_stats examples") {
  const std::vector<double> five{5};
  for (double p : {1.0, 2.0, 3.7}) CHECK(wp_order_stats(five, five, p) == 0.0);
  CHECK(wp_order_stats(std::vector<double>{0, 1}, std::vector<double>{2, 3}, 1.0) == 2.0);
  CHECK(wp_order_stats(std::vector<double>{0, 2}, std::vector<double>{1, 3}, 2.0) == 1.0);
  CHECK_THROWS_AS(wp_order_stats(std::vector<double>{0, 2}, std::vector<double>{1}, 2.0), InputError);
}

TEST_CASE("c_transform examples") {
  CHECK(c_transform(std::vector<double>{0.0}, point(0), 2.0, 2.0) == 4.0);
  CHECK(c_transform(std::vector<double>{0.0, 0.0}, Discrete1D::uniform({0, 1}), 1.0, 1.0) == 0.0);
  CHECK(c_transform(std::vector<double>{0.0, -3.0}, Discrete1D::uniform({0, 1}), 3.0, 2.0) == 7.0);
}

TEST_CASE("dual_potentials_1d examples") {
  {
    const auto d = dual_potentials_1d(std::vector<double>{0}, std::vector<double>{2}, 2.0);
    CHECK(d.phi[0] == 0.0);
    CHECK(d.psi[0] == 4.0);
    CHECK(d.value == 4.0);
  }
  {
    const std::vector<double> x{0, 1}, y{2, 3};
    const auto d = dual_potentials_1d(x, y, 2.0);
    CHECK(d.phi == std::vector<double>{0.0, -3.0});
    CHECK(d.psi == std::vector<double>{4.0, 7.0});
    CHECK(d.value == 4.0);
    CHECK(max_dual_violation(x, y, d.phi, d.psi, 2.0) <= 0.0);
  }
  {
    const std::vector<double> x{-1, 0.5, 2};
    const auto d = dual_potentials_1d(x, x, 3.0);
    for (double v : d.phi) CHECK(v == 0.0);
    for (double v : d.psi) CHECK(v == 0.0);
    CHECK(d.value == 0.0);
  }
  CHECK_THROWS_AS(dual_potentials_1d(std::vector<double>{0}, std::vector<double>{1}, 1.0), InputError);
}

TEST_CASE("quantile integral equals order statistics for equal-size uniform measures") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 40;
    const double p = 1.0 + static_cast<double>(rng() % 300) / 100.0;
    auto x = sorted(oracle::random_vector(rng, n, -5, 5)), y = sorted(oracle::random_vector(rng, n, -2, 7));
    const double a = wp_quantile(Discrete1D::uniform(x), Discrete1D::uniform(y), p);
    const double b = wp_order_stats(x, y, p);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, b));
  }
}

TEST_CASE("w1_cdf equals wp_quantile with p = 1 on weighted pairs") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 15, m = 1 + rng() % 15;
    const Discrete1D mu(oracle::random_vector(rng, n, -3, 3), oracle::random_weights(rng, n));
    const Discrete1D nu(oracle::random_vector(rng, m, -1, 4), oracle::random_weights(rng, m));
    CHECK(std::abs(w1_cdf(mu, nu) - wp_quantile(mu, nu, 1.0)) <= 1e-9);
  }
}

TEST_CASE("order statistics match exhaustive assignment") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 7;
    const double p = 1.0 + static_cast<double>(t % 3);
    const auto x = oracle::random_vector(rng, n, -2, 2), y = oracle::random_vector(rng, n, -2, 2);
    CHECK(std::abs(wp_order_stats(sorted(x), sorted(y), p) - oracle::wp_by_permutations(x, y, p)) <= 1e-12);
  }
}

TEST_CASE("triangle inequality for W_p") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 20;
    const double p = 1.0 + static_cast<double>(t % 4) * 0.5;
    const auto a = Discrete1D::uniform(oracle::random_vector(rng, n, -1, 1));
    const auto b = Discrete1D(oracle::random_vector(rng, n + 2, -2, 2), oracle::random_weights(rng, n + 2));
    const auto c = Discrete1D::uniform(oracle::random_vector(rng, 3, 0, 3));
    const auto w = [p](const Discrete1D& u, const Discrete1D& v) { return std::pow(wp_quantile(u, v, p), 1.0 / p); };
    CHECK(w(a, c) <= w(a, b) + w(b, c) + 1e-12);
  }
}

TEST_CASE("translation invariance and scaling") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng() % 25;
    const double p = 1.0 + static_cast<double>(t % 3);
    auto x = sorted(oracle::random_vector(rng, n, -1, 1)), y = sorted(oracle::random_vector(rng, n, -1, 2));
    const double base = wp_order_stats(x, y, p);
    auto xs = x, ys = y, xk = x, yk = y;
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] += 3.25;
      ys[i] += 3.25;
      xk[i] *= 1.7;
      yk[i] *= 1.7;
    }
    CHECK(wp_order_stats(xs, ys, p) == doctest::Approx(base).epsilon(1e-12));
    CHECK(std::pow(wp_order_stats(xk, yk, p), 1.0 / p) == doctest::Approx(1.7 * std::pow(base, 1.0 / p)).epsilon(1e-12));
  }
}

TEST_CASE("dual potentials: feasibility, strong duality, anchoring") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 32;
    const double p = 1.25 + static_cast<double>(t % 4) * 0.75;
    auto x = sorted(oracle::random_vector(rng, n, -2, 2)), y = sorted(oracle::random_vector(rng, n, -1, 3));
    if (t % 5 == 0 && n > 2) x[1] = x[0];  // ties
    const auto d = dual_potentials_1d(x, y, p);
    CHECK(d.phi[0] == 0.0);
    // all-pairs check, independent of max_dual_violation
    double worst = -INFINITY;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, d.phi[i] + d.psi[j] - std::pow(std::abs(x[i] - y[j]), p));
    CHECK(worst <= 1e-9);
    CHECK(std::abs(max_dual_violation(x, y, d.phi, d.psi, p) - worst) <= 1e-12 * std::max(1.0, std::abs(worst)));
    double dual = 0.0;
    for (std::size_t i = 0; i < n; ++i) dual += (d.phi[i] + d.psi[i]) / static_cast<double>(n);
    CHECK(std::abs(dual - wp_order_stats(x, y, p)) <= 1e-9);
  }
}

TEST_CASE("dual value equals the assignment optimum for n <= 6") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 6;
    const auto x = oracle::random_vector(rng, n, -1, 1), y = oracle::random_vector(rng, n, -1, 1);
    const auto d = dual_potentials_1d(sorted(x), sorted(y), 2.0);
    CHECK(std::abs(d.value - oracle::wp_by_permutations(x, y, 2.0)) <= 1e-12);
  }
}

TEST_CASE("psi is the c-transform of phi on the target atoms") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + rng() % 20;
    auto x = sorted(oracle::random_vector(rng, n, -2, 2)), y = sorted(oracle::random_vector(rng, n, -2, 2));
    const auto d = dual_potentials_1d(x, y, 2.0);
    const auto src = Discrete1D::uniform(x);
    for (std::size_t j = 0; j < n; ++j) CHECK(c_transform(d.phi, src, y[j], 2.0) == doctest::Approx(d.psi[j]).epsilon(1e-9));
  }
}
