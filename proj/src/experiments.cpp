#include "rot/experiments.hpp"

#include "rot/error.hpp"
#include "rot/sliced.hpp"

namespace rot {

SampleMatrix sample_discrete(const DiscreteMeasure& m, std::size_t n, std::mt19937_64& rng) {
  std::discrete_distribution<std::size_t> pick(m.weights().begin(), m.weights().end());
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = pick(rng);
  return m.points().select(idx);
}

SampleMatrix sample_box(std::size_t n, const std::vector<double>& lo, const std::vector<double>& hi,
                        std::mt19937_64& rng) {
  if (lo.size() != hi.size()) throw InputError("sample_box: bounds differ in dimension");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t d = lo.size();
  std::vector<double> v(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) v[i * d + k] = lo[k] + (hi[k] - lo[k]) * u(rng);
  return SampleMatrix(n, d, std::move(v));
}

SampleMatrix sample_gaussian(std::size_t n, const std::vector<double>& mean, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const std::size_t d = mean.size();
  std::vector<double> v(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) v[i * d + k] = mean[k] + g(rng);
  return SampleMatrix(n, d, std::move(v));
}

DiscreteMeasure eot_preset_source() {
  return DiscreteMeasure(SampleMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {0.5, 0.5}}),
                         {0.10, 0.20, 0.30, 0.25, 0.15});
}

DiscreteMeasure eot_preset_target() {
  return DiscreteMeasure(SampleMatrix::from_rows({{0.2, 0.1}, {1.2, 0.4}, {0.4, 1.3}, {1.5, 1.1}, {0.9, 0.2}}),
                         {0.30, 0.10, 0.20, 0.15, 0.25});
}

CltExperiment eot_clt_experiment(const EotCltOptions& opt) {
  const auto mu = eot_preset_source();
  const auto nu = eot_preset_target();
  const auto ref = eot_with_eps(mu, nu, opt.eps, {100000, opt.reference_tol});
  if (!ref.converged) throw NumericalError("EOT reference solve did not reach tolerance");

  CltExperiment exp;
  exp.name = "eot-discrete";
  exp.n = opt.n;
  exp.level = opt.level;
  exp.reference = ref.value;
  exp.reference_note = "S(mu, nu) by Sinkhorn on the population atoms at marginal tolerance " +
                       std::to_string(opt.reference_tol);
  const SinkhornConfig cfg{opt.eps, 100000, opt.replicate_tol};
  exp.replicate = [=](const SeedPolicy& seed) {
    auto rng = seed.stream(0);
    const auto x = sample_discrete(mu, opt.n, rng);
    const auto est = eot_estimate(x, nu, cfg);
    Replication r{est.value, est.v1, std::nullopt};
    if (opt.bootstrap_B > 0) {
      Statistic stat{"eot", [&](const SampleMatrix& xb, const SampleMatrix*) { return eot_estimate(xb, nu, cfg).value; }};
      r.ci = bootstrap(stat, x, nullptr, opt.bootstrap_B, seed.child(1), opt.level).ci;
    }
    return r;
  };
  return exp;
}

CltExperiment sliced_boxes_experiment(const SlicedCltOptions& opt) {
  const auto dirs = sample_sphere(2, opt.k, SeedPolicy(opt.direction_seed));
  CltExperiment exp;
  exp.name = "sliced-uniform-boxes";
  exp.n = opt.n;
  exp.reference_note = "self-centered: population value not computed";
  exp.replicate = [=](const SeedPolicy& seed) {
    auto rng = seed.stream(0);
    const auto x = sample_box(opt.n, {0.0, 0.0}, {1.0, 1.0}, rng);
    const auto y = sample_box(opt.n, {1.0, 0.0}, {2.0, 1.0}, rng);
    const double t = avg_sliced_wp(x, y, opt.p, dirs).value;
    const auto v = variance_vp(x, y, opt.p, dirs, Design::two_sample);
    return Replication{t, v.total(), std::nullopt};
  };
  return exp;
}

CltExperiment point_mass_experiment(std::size_t n, std::size_t d) {
  CltExperiment exp;
  exp.name = "point-mass";
  exp.n = n;
  exp.reference = 0.0;
  exp.reference_note = "distance of a point mass to itself";
  exp.replicate = [n, d](const SeedPolicy&) {
    const SampleMatrix x(n, d, std::vector<double>(n * d, 0.0));
    const auto dirs = sample_sphere(d, 8, SeedPolicy(1));
    const double t = avg_sliced_wp(x, x, 2.0, dirs).value;
    return Replication{t, variance_vp(x, x, 2.0, dirs).total(), std::nullopt};
  };
  return exp;
}

}  // namespace rot
