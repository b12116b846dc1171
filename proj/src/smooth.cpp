#include "rot/smooth.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "rot/error.hpp"
#include "rot/ot_nd.hpp"
#include "rot/parallel.hpp"

namespace rot {

namespace {

constexpr std::size_t kChunk = 1024;

double bump(double r2) {
  if (r2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r2));
}

// integral_0^1 r^power exp(-1/(1-r^2)) dr
double radial_integral(double power) {
  auto f = [power](double r) { return std::pow(r, power) * bump(r * r); };
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-13, &err);
}

}  // namespace

double sphere_area(std::size_t d) {
  const double h = static_cast<double>(d) / 2.0;
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

MollifierKernel::MollifierKernel(double sigma, std::size_t d) : sigma_(sigma), d_(d) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("MollifierKernel: sigma must be > 0");
  if (d == 0) throw InputError("MollifierKernel: dimension must be >= 1");
  normalizer_ = sphere_area(d) * radial_integral(static_cast<double>(d) - 1.0);
}

double MollifierKernel::pdf(std::span<const double> x) const {
  if (x.size() != d_) throw InputError("MollifierKernel::pdf: dimension mismatch");
  double r2 = 0.0;
  for (double v : x) r2 += (v / sigma_) * (v / sigma_);
  if (r2 >= 1.0) return 0.0;
  return bump(r2) / (normalizer_ * std::pow(sigma_, static_cast<double>(d_)));
}

double MollifierKernel::max_pdf() const {
  return std::exp(-1.0) / (normalizer_ * std::pow(sigma_, static_cast<double>(d_)));
}

double MollifierKernel::unit_moment(double p) const {
  const double dd = static_cast<double>(d_);
  return sphere_area(d_) * radial_integral(dd - 1.0 + p) / normalizer_;
}

SampleMatrix sample_kernel(const MollifierKernel& kernel, std::size_t m, const SeedPolicy& seed) {
  if (m == 0) throw InputError("sample_kernel: m must be >= 1");
  const std::size_t d = kernel.dim();
  const double sigma = kernel.sigma();
  std::vector<double> out(m * d);
  const std::size_t chunks = (m + kChunk - 1) / kChunk;
#pragma omp parallel for schedule(static)
  for (long long cc = 0; cc < static_cast<long long>(chunks); ++cc) {
    const auto c = static_cast<std::size_t>(cc);
    auto rng = seed.stream(c);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss;
    std::vector<double> u(d);
    const std::size_t end = std::min(m, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      while (true) {
        double r2 = 0.0;
        if (d == 1) {
          u[0] = 2.0 * unif(rng) - 1.0;
          r2 = u[0] * u[0];
        } else {
          double nrm = 0.0;
          for (double& v : u) {
            v = gauss(rng);
            nrm += v * v;
          }
          nrm = std::sqrt(nrm);
          if (!(nrm > 0.0)) continue;
          const double radius = std::pow(unif(rng), 1.0 / static_cast<double>(d));
          for (double& v : u) v *= radius / nrm;
          r2 = radius * radius;
        }
        if (r2 >= 1.0) continue;
        // pdf / max pdf = exp(1 - 1/(1 - r^2))
        if (unif(rng) < std::exp(1.0 - 1.0 / (1.0 - r2))) break;
      }
      for (std::size_t k = 0; k < d; ++k) out[i * d + k] = sigma * u[k];
    }
  }
  return SampleMatrix(m, d, std::move(out));
}

double SmoothEstimate::mc_error() const {
  if (rep_values.empty()) return 0.0;
  return 3.0 * rep_sd / std::sqrt(static_cast<double>(rep_values.size()));
}

namespace {

SampleMatrix perturb(const SampleMatrix& x, const SampleMatrix& noise) {
  std::vector<double> v(x.data().begin(), x.data().end());
  const auto z = noise.data();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += z[i];
  return SampleMatrix(x.rows(), x.dim(), std::move(v));
}

}  // namespace

SmoothEstimate smooth_wp(const SampleMatrix& x, const SampleMatrix& y, const MollifierKernel& kernel, double p,
                         std::size_t reps, const SeedPolicy& seed, NoiseSharing sharing) {
  if (reps == 0) throw InputError("smooth_wp: need at least one noise rep");
  if (x.rows() != y.rows()) throw InputError("smooth_wp: requires equal sample counts");
  if (x.dim() != y.dim() || x.dim() != kernel.dim())
    throw InputError("smooth_wp: sample and kernel dimensions must agree");
  if (!(p >= 1.0)) throw InputError("Wasserstein order p must be >= 1");
  SmoothEstimate est;
  est.rep_values.resize(reps);
  // coupled: y_perm[i] reuses the draw of x_i along the unperturbed optimal matching
  std::vector<std::size_t> src;
  if (sharing == NoiseSharing::coupled) {
    const auto perm = hungarian(pairwise_cost(x, y, p)).perm;
    src.resize(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) src[perm[i]] = i;
  }
  parallel_for(reps, [&](std::size_t k) {
    const auto nx = sample_kernel(kernel, x.rows(), seed.child(2 * k));
    SampleMatrix ny = nx;
    if (sharing == NoiseSharing::independent) {
      ny = sample_kernel(kernel, y.rows(), seed.child(2 * k + 1));
    } else if (sharing == NoiseSharing::coupled) {
      ny = nx.select(src);
    }
    const double wpp = exact_wp(perturb(x, nx), perturb(y, ny), p);
    est.rep_values[k] = std::pow(std::max(wpp, 0.0), 1.0 / p);
  });
  est.value = mean(est.rep_values);
  est.rep_sd = std::sqrt(population_variance(est.rep_values));
  return est;
}

bool Ball::contains(std::span<const double> x) const {
  if (x.size() != center.size()) throw InputError("Ball: dimension mismatch");
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - center[i]) * (x[i] - center[i]);
  return std::sqrt(r2) <= radius;
}

Truncated<Discrete1D> truncate(const Discrete1D& m, const Ball& a) {
  if (a.center.size() != 1) throw InputError("truncate: ball must be one-dimensional");
  std::vector<double> atoms, weights;
  double mass = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double x = m.atoms()[i];
    if (std::abs(x - a.center[0]) <= a.radius) {
      atoms.push_back(x);
      weights.push_back(m.weights()[i]);
      mass += m.weights()[i];
    }
  }
  if (!(mass > 0.0)) throw InputError("truncate: the set has zero mass");
  if (atoms.size() == m.size()) return {m, 1.0};
  for (double& w : weights) w /= mass;
  return {Discrete1D(std::move(atoms), std::move(weights)), mass};
}

Truncated<DiscreteMeasure> truncate(const DiscreteMeasure& m, const Ball& a) {
  std::vector<std::size_t> keep;
  std::vector<double> weights;
  double mass = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (a.contains(m.points().row(i))) {
      keep.push_back(i);
      weights.push_back(m.weights()[i]);
      mass += m.weights()[i];
    }
  }
  if (!(mass > 0.0)) throw InputError("truncate: the set has zero mass");
  if (keep.size() == m.size()) return {m, 1.0};
  for (double& w : weights) w /= mass;
  return {DiscreteMeasure(m.points().select(keep), std::move(weights)), mass};
}

double truncation_bound(double p, double mass, double diam) {
  if (!(mass > 0.0)) throw InputError("truncation_bound: mass must be > 0");
  if (mass > 1.0 + 1e-12) throw InputError("truncation_bound: mass must be <= 1");
  if (!(diam >= 0.0)) throw InputError("truncation_bound: diameter must be >= 0");
  if (!(p >= 1.0)) throw InputError("Wasserstein order p must be >= 1");
  return (1.0 / mass - 1.0) * std::pow(diam, p);
}

}  // namespace rot
