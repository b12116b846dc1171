#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "rot/error.hpp"
#include "rot/experiments.hpp"
#include "rot/ot1d.hpp"
#include "rot/parallel.hpp"
#include "rot/serial.hpp"
#include "rot/sliced.hpp"

using namespace rot;

namespace {

SampleMatrix cloud(std::mt19937_64& rng, std::size_t n, std::size_t d, double lo, double hi) {
  return SampleMatrix(n, d, oracle::random_vector(rng, n * d, lo, hi));
}

// Rotate rows of a 2-column matrix by angle a.
SampleMatrix rotate(const SampleMatrix& x, double a) {
  std::vector<double> v(x.data().begin(), x.data().end());
  const double c = std::cos(a), s = std::sin(a);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double u = v[2 * i], w = v[2 * i + 1];
    v[2 * i] = c * u - s * w;
    v[2 * i + 1] = s * u + c * w;
  }
  return SampleMatrix(x.rows(), 2, v);
}

Direction rotate(const Direction& th, double a) {
  const double c = std::cos(a), s = std::sin(a);
  return Direction::normalized({c * th[0] - s * th[1], s * th[0] + c * th[1]});
}

}  // namespace

TEST_CASE("avg_sliced_wp examples") {
  std::mt19937_64 rng(20);
  const auto x = cloud(rng, 30, 3, -1, 1);
  const auto dirs = sample_sphere(3, 20, SeedPolicy(1));
  CHECK(avg_sliced_wp(x, x, 2.0, dirs).value == 0.0);

  const auto d1 = sample_sphere(1, 2, SeedPolicy(0));
  CHECK(avg_sliced_wp(SampleMatrix(1, 1, {0}), SampleMatrix(1, 1, {2}), 1.0, d1).value == 2.0);
  CHECK(avg_sliced_w1(SampleMatrix(1, 1, {0}), SampleMatrix(1, 1, {2}), d1).value == 2.0);

  CHECK_THROWS_AS(avg_sliced_wp(x, x, 2.0, std::vector<Direction>{}), InputError);
}

TEST_CASE("avg_sliced_wp approaches a * 2/pi for point masses on the circle") {
  // E|theta_1| on S^1 by quadrature of |cos|
  const double e_abs = oracle::simpson([](double t) { return std::abs(std::cos(t)); }, 0.0, 2 * std::numbers::pi, 1e-13) /
                       (2 * std::numbers::pi);
  CHECK(e_abs == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-10));
  const double a = 1.5;
  const std::size_t k = 40000;
  const auto dirs = sample_sphere(2, k, SeedPolicy(99));
  const auto est = avg_sliced_wp(SampleMatrix::from_rows({{0, 0}}), SampleMatrix::from_rows({{a, 0}}), 1.0, dirs);
  std::vector<double> v;
  for (const auto& dv : est.per_direction) v.push_back(dv.value);
  const double se = std::sqrt(population_variance(v) / static_cast<double>(k));
  CHECK(std::abs(est.value - a * e_abs) <= 4.0 * se);
}

TEST_CASE("avg_sliced_w1 equals the quantile path with p = 1") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const auto x = cloud(rng, 10 + t, 2, 0, 1), y = cloud(rng, 7 + 2 * t, 2, 0.5, 2);
    const auto dirs = sample_sphere(2, 25, SeedPolicy(t));
    CHECK(std::abs(avg_sliced_w1(x, y, dirs).value - avg_sliced_wp(x, y, 1.0, dirs).value) <= 1e-9);
  }
}

TEST_CASE("per-direction values equal independent 1D computations") {
  std::mt19937_64 rng(22);
  const auto x = cloud(rng, 15, 3, 0, 1), y = cloud(rng, 15, 3, 0, 1);
  const auto dirs = sample_sphere(3, 10, SeedPolicy(2));
  const auto est = avg_sliced_wp(x, y, 2.0, dirs);
  double s = 0.0;
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    auto px = project_values(x, dirs[j]), py = project_values(y, dirs[j]);
    const double o = oracle::wp_by_permutations(std::vector<double>(px.begin(), px.begin() + 7),
                                                std::vector<double>(py.begin(), py.begin() + 7), 2.0);
    const auto sub = [&](const SampleMatrix& m) {
      std::vector<std::size_t> idx{0, 1, 2, 3, 4, 5, 6};
      return m.select(idx);
    };
    CHECK(avg_sliced_wp(sub(x), sub(y), 2.0, std::span(dirs).subspan(j, 1)).value == doctest::Approx(o).epsilon(1e-12));
    std::sort(px.begin(), px.end());
    std::sort(py.begin(), py.end());
    CHECK(est.per_direction[j].value == doctest::Approx(wp_order_stats(px, py, 2.0)).epsilon(1e-14));
    s += est.per_direction[j].value;
  }
  CHECK(est.value == doctest::Approx(s / 10.0).epsilon(1e-14));
  CHECK(est.k == 10);
}

TEST_CASE("max_sliced_wp examples") {
  std::mt19937_64 rng(23);
  MaxSlicedConfig cfg;
  cfg.directions = sample_sphere(2, 16, SeedPolicy(3));
  SUBCASE("X = Y") {
    const auto x = cloud(rng, 20, 2, 0, 1);
    const auto [est, arg] = max_sliced_wp(x, x, 2.0, cfg);
    CHECK(est.value == 0.0);
    CHECK(arg.directions.size() == est.per_direction.size());
  }
  SUBCASE("point masses: |z|^p at z/|z|") {
    const auto [est, arg] = max_sliced_wp(SampleMatrix::from_rows({{0, 0}}), SampleMatrix::from_rows({{3, -4}}), 2.0, cfg);
    CHECK(est.value == doctest::Approx(25.0).epsilon(1e-10));
    REQUIRE(!arg.directions.empty());
    const auto& th = arg.directions.front();
    CHECK(std::abs(std::abs(th[0] * 0.6 - th[1] * 0.8) - 1.0) < 1e-4);
  }
  SUBCASE("shifted clouds match a dense grid oracle") {
    const auto x = cloud(rng, 200, 2, 0, 1);
    std::vector<double> yv(x.data().begin(), x.data().end());
    for (std::size_t i = 0; i < 200; ++i) yv[2 * i] += 1.0;
    const SampleMatrix y(200, 2, yv);
    double best = 0.0, best_angle = 0.0;
    for (int a = 0; a < 3600; ++a) {
      const double ang = 2 * std::numbers::pi * a / 3600.0;
      const Direction th = Direction::normalized({std::cos(ang), std::sin(ang)});
      const double v = avg_sliced_wp(x, y, 2.0, std::span(&th, 1)).value;
      if (v > best) best = v, best_angle = ang;
    }
    const auto [est, arg] = max_sliced_wp(x, y, 2.0, cfg);
    CHECK(est.value >= best - 1e-9);
    CHECK(est.value == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(std::cos(best_angle)) > 0.99);
    CHECK(std::abs(arg.directions.front()[0]) > 0.99);
    for (const auto& th : arg.directions)
      CHECK(avg_sliced_wp(x, y, 2.0, std::span(&th, 1)).value >= est.value - arg.delta - 1e-12);
  }
}

TEST_CASE("max is at least the average on the same directions") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 10; ++t) {
    const auto x = cloud(rng, 30, 3, 0, 1), y = cloud(rng, 30, 3, 0.2, 1.5);
    MaxSlicedConfig cfg;
    cfg.directions = sample_sphere(3, 20, SeedPolicy(t));
    CHECK(max_sliced_wp(x, y, 2.0, cfg).first.value >= avg_sliced_wp(x, y, 2.0, cfg.directions).value);
  }
}

TEST_CASE("sliced estimates are rotation invariant") {
  std::mt19937_64 rng(25);
  const auto x = cloud(rng, 40, 2, 0, 1), y = cloud(rng, 40, 2, 0.5, 1.5);
  const auto dirs = sample_sphere(2, 30, SeedPolicy(4));
  const double a = 0.7;
  std::vector<Direction> rdirs;
  for (const auto& d : dirs) rdirs.push_back(rotate(d, a));
  const auto xr = rotate(x, a), yr = rotate(y, a);
  CHECK(avg_sliced_wp(xr, yr, 2.0, rdirs).value == doctest::Approx(avg_sliced_wp(x, y, 2.0, dirs).value).epsilon(1e-12));
  CHECK(avg_sliced_wp(xr, yr, 1.0, rdirs).value == doctest::Approx(avg_sliced_wp(x, y, 1.0, dirs).value).epsilon(1e-12));
  MaxSlicedConfig c1, c2;
  c1.directions = dirs;
  c2.directions = rdirs;
  c1.max_rounds = c2.max_rounds = 0;
  CHECK(max_sliced_wp(xr, yr, 2.0, c2).first.value == doctest::Approx(max_sliced_wp(x, y, 2.0, c1).first.value).epsilon(1e-12));
}

TEST_CASE("unequal sample counts use the quantile path") {
  std::mt19937_64 rng(26);
  const auto x = cloud(rng, 12, 2, 0, 1), y = cloud(rng, 17, 2, 0, 1);
  const auto dirs = sample_sphere(2, 5, SeedPolicy(5));
  const auto est = avg_sliced_wp(x, y, 2.0, dirs);
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(est.per_direction[j].value == doctest::Approx(wp_quantile(project(x, dirs[j]), project(y, dirs[j]), 2.0)));
}

TEST_CASE("variance_vp examples") {
  const auto pm = sample_sphere(1, 2, SeedPolicy(0));
  REQUIRE(pm[0][0] == 1.0);
  REQUIRE(pm[1][0] == -1.0);
  const auto v = variance_vp(SampleMatrix(2, 1, {0, 1}), SampleMatrix(2, 1, {5, 5}), 2.0, pm, Design::one_sample);
  CHECK(v.v2 == doctest::Approx(20.25).epsilon(1e-14));
  CHECK(!v.w2);
  const auto same = variance_vp(SampleMatrix::from_rows({{1, 2}, {1, 2}}), SampleMatrix::from_rows({{0, 0}, {3, 1}}), 2.0,
                                sample_sphere(2, 10, SeedPolicy(6)));
  CHECK(same.v2 == 0.0);
  CHECK_THROWS_AS(variance_vp(SampleMatrix(2, 1, {0, 1}), SampleMatrix(2, 1, {5, 5}), 1.0, pm), InputError);
}

TEST_CASE("variance_vp equals the variance of hand-averaged potentials") {
  std::mt19937_64 rng(27);
  const std::size_t n = 25;
  const auto x = cloud(rng, n, 2, 0, 1), y = cloud(rng, n, 2, 1, 2);
  const auto dirs = sample_sphere(2, 12, SeedPolicy(7));
  std::vector<double> a(n, 0.0), b(n, 0.0);
  std::vector<double> shift_a(n, 0.0);
  for (std::size_t j = 0; j < dirs.size(); ++j) {
    const auto px = project_values(x, dirs[j]), py = project_values(y, dirs[j]);
    auto sx = px, sy = py;
    std::sort(sx.begin(), sx.end());
    std::sort(sy.begin(), sy.end());
    const auto pot = dual_potentials_1d(sx, sy, 2.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto ix = static_cast<std::size_t>(std::lower_bound(sx.begin(), sx.end(), px[i]) - sx.begin());
      const auto iy = static_cast<std::size_t>(std::lower_bound(sy.begin(), sy.end(), py[i]) - sy.begin());
      a[i] += pot.phi[ix] / 12.0;
      b[i] += pot.psi[iy] / 12.0;
      shift_a[i] += (pot.phi[ix] + 3.0 * static_cast<double>(j)) / 12.0;  // direction-dependent constant
    }
  }
  const auto v = variance_vp(x, y, 2.0, dirs);
  CHECK(v.v2 == doctest::Approx(population_variance(a)).epsilon(1e-10));
  CHECK(*v.w2 == doctest::Approx(population_variance(b)).epsilon(1e-10));
  CHECK(population_variance(shift_a) == doctest::Approx(v.v2).epsilon(1e-10));
  CHECK(v.total() == doctest::Approx(v.v2 + *v.w2));
}

TEST_CASE("variance_v1_sign matches direct summation") {
  // one-sample, d = 1, three atoms against a reference far to the left
  const SampleMatrix x(3, 1, {4.0, 5.0, 5.5});
  const Discrete1D nu({0.0, 0.5, 1.0}, {0.2, 0.5, 0.3});
  const std::vector<Direction> dirs{Direction({1.0})};
  ProjectedReference ref{[&](std::size_t, double t) { return empirical_cdf(nu, t); },
                         [](std::size_t) { return std::pair{0.0, 1.0}; }};
  const std::size_t intervals = 500;
  const auto v = variance_v1_sign(x, ref, dirs, TGridConfig{intervals});

  const double lo = 0.0, hi = 5.5, h = (hi - lo) / intervals;
  const auto fx = Discrete1D::uniform({4.0, 5.0, 5.5});
  std::vector<double> direct(3, 0.0), classical(3, 0.0);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t k = 0; k < intervals; ++k) {
      const double t = lo + h * static_cast<double>(k);
      const double diff = empirical_cdf(fx, t) - empirical_cdf(nu, t);
      const int s = diff > 0 ? 1 : (diff < 0 ? -1 : 0);
      const double ind = x(i, 0) <= t ? 1.0 : 0.0;
      direct[i] += h * s * (ind - empirical_cdf(fx, t));
      if (t >= 1.0) classical[i] -= h * (ind - empirical_cdf(fx, t));  // sign is -1 wherever F_nu = 1
    }
  }
  CHECK(v.v2 == doctest::Approx(population_variance(direct)).epsilon(1e-12));
  CHECK(v.v2 == doctest::Approx(population_variance(classical)).epsilon(1e-9));
  // classical W1 influence: -(integral of 1{X_i <= t} - F) = X_i - mean, so Var = Var(X)
  CHECK(v.v2 == doctest::Approx(population_variance(std::vector<double>{4.0, 5.0, 5.5})).epsilon(0.05));
}

TEST_CASE("variance_v1_sign is zero for a point mass equal to the reference") {
  const SampleMatrix x(5, 2, {1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
  const auto dirs = sample_sphere(2, 8, SeedPolicy(8));
  const auto v = variance_v1_sign(x, x, dirs);
  CHECK(v.v2 == 0.0);
  CHECK(*v.w2 == 0.0);
}

TEST_CASE("parallel sliced kernels equal the serial references for any thread count") {
  std::mt19937_64 rng(28);
  const auto x = cloud(rng, 120, 3, 0, 1), y = cloud(rng, 120, 3, 0.3, 1.2);
  const auto dirs = sample_sphere(3, 37, SeedPolicy(9));
  const auto ref_pd = serial::per_direction_wp(x, y, 2.0, dirs);
  const double ref_avg = serial::avg_sliced_wp(x, y, 2.0, dirs);
  const auto ref_vp = serial::variance_vp(x, y, 2.0, dirs);
  const auto ref_v1 = serial::variance_v1_sign(x, y, dirs, 400);
  std::vector<double> first;
  for (int threads : {1, 2, 3, 8}) {
    ThreadLimit lim(threads);
    const auto pd = per_direction_wp(x, y, 2.0, dirs);
    for (std::size_t j = 0; j < pd.size(); ++j) CHECK(pd[j] == doctest::Approx(ref_pd[j]).epsilon(1e-13));
    const double avg = avg_sliced_wp(x, y, 2.0, dirs).value;
    CHECK(avg == doctest::Approx(ref_avg).epsilon(1e-13));
    const auto vp = variance_vp(x, y, 2.0, dirs);
    CHECK(vp.v2 == doctest::Approx(ref_vp.v2).epsilon(1e-10));
    CHECK(*vp.w2 == doctest::Approx(*ref_vp.w2).epsilon(1e-10));
    const auto v1 = variance_v1_sign(x, y, dirs, TGridConfig{400});
    CHECK(v1.v2 == doctest::Approx(ref_v1.v2).epsilon(1e-10));
    CHECK(*v1.w2 == doctest::Approx(*ref_v1.w2).epsilon(1e-10));
    // bitwise identical across thread counts
    const std::vector<double> now{avg, vp.v2, *vp.w2, v1.v2, *v1.w2};
    if (first.empty()) first = now;
    CHECK(now == first);
  }
}

TEST_CASE("sign_of") {
  CHECK(sign_of(0.0) == 0);
  CHECK(sign_of(-0.0) == 0);
  CHECK(sign_of(1e-300) == 1);
  CHECK(sign_of(-2.0) == -1);
}
