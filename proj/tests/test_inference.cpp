#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rot/error.hpp"
#include "rot/experiments.hpp"
#include "rot/inference.hpp"
#include "rot/parallel.hpp"

using namespace rot;

namespace {

Statistic mean_stat() {
  return {"mean", [](const SampleMatrix& x, const SampleMatrix*) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.rows(); ++i) s += x(i, 0);
            return s / static_cast<double>(x.rows());
          }};
}

Statistic diff_of_means() {
  return {"diff", [](const SampleMatrix& x, const SampleMatrix* y) {
            double a = 0.0, b = 0.0;
            for (std::size_t i = 0; i < x.rows(); ++i) a += x(i, 0);
            for (std::size_t i = 0; i < y->rows(); ++i) b += (*y)(i, 0);
            return a / static_cast<double>(x.rows()) - b / static_cast<double>(y->rows());
          }};
}

}  // namespace

TEST_CASE("normal quantile and cdf") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_cdf(0.0) == 0.5);
  for (double p : {1e-6, 0.01, 0.3, 0.9, 0.999}) CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  CHECK_THROWS_AS(normal_quantile(0.0), InputError);
  CHECK_THROWS_AS(normal_quantile(1.0), InputError);
}

TEST_CASE("normal_ci") {
  const auto ci = normal_ci(1.0, 4.0, 100, 0.95);
  CHECK(ci.lo == doctest::Approx(1.0 - 1.959963984540054 * 0.2).epsilon(1e-14));
  CHECK(ci.hi == doctest::Approx(1.0 + 1.959963984540054 * 0.2).epsilon(1e-14));
  const auto z = normal_ci(2.0, 0.0, 10, 0.9);
  CHECK(z.lo == 2.0);
  CHECK(z.hi == 2.0);
  CHECK_THROWS_AS(normal_ci(0.0, -1.0, 10, 0.95), InputError);
  CHECK_THROWS_AS(normal_ci(0.0, 1.0, 10, 1.0), InputError);
}

TEST_CASE("type-7 sample quantile") {
  const std::vector<double> v{3, 1, 4, 1, 5};
  CHECK(sample_quantile(v, 0.0) == 1.0);
  CHECK(sample_quantile(v, 1.0) == 5.0);
  CHECK(sample_quantile(v, 0.5) == 3.0);
  CHECK(sample_quantile(v, 0.25) == 1.0);
  CHECK(sample_quantile(v, 0.9) == doctest::Approx(4.6));
  CHECK(sample_quantile({7.0}, 0.3) == 7.0);
}

TEST_CASE("ks_to_standard_normal") {
  std::vector<double> q;
  for (int i = 0; i < 1000; ++i) q.push_back(normal_quantile((i + 0.5) / 1000.0));
  CHECK(ks_to_standard_normal(q) == doctest::Approx(0.0005).epsilon(1e-6));
  std::vector<double> shifted(q);
  for (auto& v : shifted) v += 10.0;
  CHECK(ks_to_standard_normal(shifted) > 0.99);
  CHECK_THROWS_AS(ks_to_standard_normal(std::vector<double>(5, 0.0)), InputError);
}

TEST_CASE("bootstrap: degenerate data give a zero-width interval") {
  const SampleMatrix x(50, 1, std::vector<double>(50, 3.0));
  const auto r = bootstrap(mean_stat(), x, nullptr, 200, SeedPolicy(1));
  CHECK(r.estimate == 3.0);
  CHECK(r.ci.lo == 3.0);
  CHECK(r.ci.hi == 3.0);
  CHECK(r.variance == 0.0);
}

TEST_CASE("bootstrap variance of the mean matches the sample variance") {
  std::mt19937_64 rng(60);
  const std::size_t n = 400;
  const auto v = oracle::random_vector(rng, n, 0, 1);
  const SampleMatrix x(n, 1, v);
  const auto r = bootstrap(mean_stat(), x, nullptr, 2000, SeedPolicy(2));
  CHECK(r.replicates.size() == 2000);
  CHECK(r.n == n);
  CHECK(r.variance == doctest::Approx(population_variance(v)).epsilon(0.1));
  CHECK(r.ci.contains(r.estimate));
  // reverse percentile: lo = T - q_{hi}/sqrt(n)
  CHECK(r.ci.lo == doctest::Approx(r.estimate - sample_quantile(r.replicates, 0.975) / std::sqrt(double(n))));
  CHECK(r.ci.hi == doctest::Approx(r.estimate - sample_quantile(r.replicates, 0.025) / std::sqrt(double(n))));
}

TEST_CASE("two-sample bootstrap resamples both sides") {
  std::mt19937_64 rng(61);
  const SampleMatrix x(300, 1, oracle::random_vector(rng, 300, 0, 1));
  const SampleMatrix y(300, 1, oracle::random_vector(rng, 300, 0, 2));
  const auto r = bootstrap(diff_of_means(), x, &y, 1500, SeedPolicy(3));
  // Var sqrt(n)(xbar - ybar) = 1/12 + 4/12
  CHECK(r.variance == doctest::Approx(5.0 / 12.0).epsilon(0.12));
}

TEST_CASE("bootstrap and subsample are reproducible across thread counts") {
  std::mt19937_64 rng(62);
  const SampleMatrix x(100, 1, oracle::random_vector(rng, 100, 0, 1));
  const auto a = bootstrap(mean_stat(), x, nullptr, 300, SeedPolicy(4));
  const auto s = subsample(mean_stat(), x, nullptr, 22, 300, SeedPolicy(4));
  ThreadLimit one(1);
  CHECK(bootstrap(mean_stat(), x, nullptr, 300, SeedPolicy(4)).replicates == a.replicates);
  CHECK(subsample(mean_stat(), x, nullptr, 22, 300, SeedPolicy(4)).replicates == s.replicates);
}

TEST_CASE("subsample") {
  CHECK(default_subsample_size(1000) == 100);
  CHECK(default_subsample_size(8) == 4);
  CHECK(default_subsample_size(500) == 63);
  std::mt19937_64 rng(63);
  const std::size_t n = 1000;
  const SampleMatrix x(n, 1, oracle::random_vector(rng, n, 0, 1));
  const auto r = subsample(mean_stat(), x, nullptr, 100, 1000, SeedPolicy(5));
  CHECK(r.m == 100);
  CHECK(r.n == n);
  // without replacement: finite population factor (1 - m/n)
  CHECK(r.variance == doctest::Approx(population_variance(std::vector<double>(x.data().begin(), x.data().end())) * 0.9)
                          .epsilon(0.15));
  CHECK(r.k(0.5) == doctest::Approx(sample_quantile(r.replicates, 0.5)));
  CHECK(r.corrected(0.5) == doctest::Approx(r.estimate - r.k(0.5) / std::sqrt(double(n))));
  CHECK_THROWS_AS(subsample(mean_stat(), x, nullptr, n, 100, SeedPolicy(5)), InputError);
  // a subsample of size m without replacement never repeats a row
  const Statistic distinct{"distinct", [](const SampleMatrix& s, const SampleMatrix*) {
                             std::vector<double> v(s.data().begin(), s.data().end());
                             std::sort(v.begin(), v.end());
                             return static_cast<double>(std::unique(v.begin(), v.end()) - v.begin());
                           }};
  const auto d = subsample(distinct, x, nullptr, 50, 20, SeedPolicy(6));
  for (double v : d.replicates) CHECK(v == doctest::Approx(std::sqrt(50.0) * (50.0 - 1000.0)));
}

TEST_CASE("clt_experiment on a known CLT") {
  CltExperiment e;
  e.name = "uniform mean";
  e.n = 200;
  e.reference = 0.5;
  e.replicate = [](const SeedPolicy& s) {
    auto rng = s.stream(0);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<double> v(200);
    for (auto& t : v) t = u(rng);
    return Replication{mean(v), population_variance(v), std::nullopt};
  };
  const auto r = clt_experiment(e, 400, SeedPolicy(7));
  CHECK(!r.degenerate);
  CHECK(!r.self_centered);
  REQUIRE(r.ks_distance);
  CHECK(*r.ks_distance < 0.08);
  REQUIRE(r.coverage);
  CHECK(*r.coverage > 0.9);
  CHECK(r.replicate_variance == doctest::Approx(1.0 / 12.0).epsilon(0.2));
  ThreadLimit one(1);
  CHECK(clt_experiment(e, 400, SeedPolicy(7)).estimates == r.estimates);
}

TEST_CASE("clt_experiment flags degeneracy") {
  const auto r = clt_experiment(point_mass_experiment(50, 2), 30, SeedPolicy(8));
  CHECK(r.degenerate);
  CHECK(r.standardized.empty());
  CHECK(!r.ks_distance);
}

TEST_CASE("exceptions inside parallel loops propagate") {
  const Statistic bad{"bad", [](const SampleMatrix&, const SampleMatrix*) -> double { throw NumericalError("boom"); }};
  const SampleMatrix x(10, 1, std::vector<double>(10, 1.0));
  CHECK_THROWS_AS(bootstrap(bad, x, nullptr, 100, SeedPolicy(1)), NumericalError);
}
