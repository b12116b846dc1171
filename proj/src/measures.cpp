#include "rot/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rot/error.hpp"

namespace rot {

SampleMatrix::SampleMatrix(std::size_t n, std::size_t d, std::vector<double> data)
    : n_(n), d_(d), data_(std::move(data)) {
  if (n_ == 0 || d_ == 0) throw InputError("SampleMatrix needs n >= 1 and d >= 1");
  if (data_.size() != n_ * d_)
    throw InputError("SampleMatrix: expected " + std::to_string(n_ * d_) + " entries, got " +
                     std::to_string(data_.size()));
  for (double v : data_)
    if (!std::isfinite(v)) throw InputError("SampleMatrix: non-finite entry");
}

SampleMatrix SampleMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InputError("SampleMatrix: no rows");
  const std::size_t d = rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw InputError("SampleMatrix: ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return SampleMatrix(rows.size(), d, std::move(data));
}

SampleMatrix SampleMatrix::select(std::span<const std::size_t> idx) const {
  std::vector<double> out;
  out.reserve(idx.size() * d_);
  for (std::size_t i : idx) {
    if (i >= n_) throw InputError("SampleMatrix::select: index out of range");
    auto r = row(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return SampleMatrix(idx.size(), d_, std::move(out));
}

Discrete1D::Discrete1D(std::vector<double> atoms, std::vector<double> weights) {
  if (atoms.empty()) throw InputError("Discrete1D: no atoms");
  if (atoms.size() != weights.size()) throw InputError("Discrete1D: atoms/weights length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!std::isfinite(atoms[i])) throw InputError("Discrete1D: non-finite atom");
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i]))
      throw InputError("Discrete1D: weights must be strictly positive");
    total += weights[i];
  }
  if (std::abs(total - 1.0) > kWeightTol) throw InputError("Discrete1D: weights do not sum to 1");

  if (std::is_sorted(atoms.begin(), atoms.end())) {
    atoms_ = std::move(atoms);
    weights_ = std::move(weights);
  } else {
    std::vector<std::size_t> order(atoms.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return atoms[a] < atoms[b]; });
    atoms_.resize(order.size());
    weights_.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      atoms_[i] = atoms[order[i]];
      weights_[i] = weights[order[i]];
    }
  }
  cumulative_.resize(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
  cumulative_.back() = 1.0;
}

Discrete1D Discrete1D::uniform(std::vector<double> atoms) {
  if (atoms.empty()) throw InputError("Discrete1D: no atoms");
  for (double a : atoms)
    if (!std::isfinite(a)) throw InputError("Discrete1D: non-finite atom");
  std::sort(atoms.begin(), atoms.end());
  const std::size_t n = atoms.size();
  Discrete1D m;
  m.atoms_ = std::move(atoms);
  m.weights_.assign(n, 1.0 / static_cast<double>(n));
  m.cumulative_.resize(n);
  // i/n exactly, not an accumulated sum of 1/n
  for (std::size_t i = 0; i < n; ++i)
    m.cumulative_[i] = static_cast<double>(i + 1) / static_cast<double>(n);
  return m;
}

DiscreteMeasure::DiscreteMeasure(SampleMatrix points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (weights_.size() != points_.rows()) throw InputError("DiscreteMeasure: weights/points mismatch");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("DiscreteMeasure: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > Discrete1D::kWeightTol)
    throw InputError("DiscreteMeasure: weights do not sum to 1");
}

DiscreteMeasure DiscreteMeasure::uniform(SampleMatrix points) {
  const std::size_t n = points.rows();
  return DiscreteMeasure(std::move(points), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

EmpiricalAtoms empirical_atoms(const SampleMatrix& samples) {
  const std::size_t n = samples.rows();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto row_less = [&](std::size_t a, std::size_t b) {
    auto ra = samples.row(a), rb = samples.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::stable_sort(order.begin(), order.end(), row_less);

  // atoms numbered in order of first appearance in the sample
  std::vector<std::size_t> group(n);
  std::vector<std::size_t> first_row;
  std::vector<std::size_t> counts;
  std::vector<std::size_t> group_first;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    if (k == 0 || row_less(order[k - 1], i)) {
      group_first.push_back(i);
      counts.push_back(0);
    }
    group[i] = group_first.size() - 1;
    ++counts.back();
  }
  std::vector<std::size_t> rank(group_first.size());
  std::vector<std::size_t> by_first(group_first.size());
  std::iota(by_first.begin(), by_first.end(), 0);
  std::sort(by_first.begin(), by_first.end(), [&](auto a, auto b) { return group_first[a] < group_first[b]; });
  for (std::size_t r = 0; r < by_first.size(); ++r) rank[by_first[r]] = r;

  std::vector<double> weights(group_first.size());
  std::vector<std::size_t> rows(group_first.size());
  for (std::size_t g = 0; g < group_first.size(); ++g) {
    rows[rank[g]] = group_first[g];
    weights[rank[g]] = static_cast<double>(counts[g]) / static_cast<double>(n);
  }
  std::vector<std::size_t> atom_of(n);
  for (std::size_t i = 0; i < n; ++i) atom_of[i] = rank[group[i]];
  return {DiscreteMeasure(samples.select(rows), std::move(weights)), std::move(atom_of)};
}

namespace {
double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}
}  // namespace

Direction::Direction(std::vector<double> components) : c_(std::move(components)) {
  if (c_.empty()) throw InputError("Direction: empty");
  if (std::abs(norm2(c_) - 1.0) > 1e-12) throw InputError("Direction: not a unit vector");
}

Direction Direction::normalized(std::vector<double> v) {
  const double nrm = norm2(v);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw InputError("Direction: cannot normalize zero vector");
  for (double& x : v) x /= nrm;
  return Direction(std::move(v));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t SeedPolicy::sub_seed(std::uint64_t task_index) const {
  return splitmix64(splitmix64(master_) ^ splitmix64(task_index + 0x632BE59BD9B4E019ULL));
}

std::mt19937_64 SeedPolicy::stream(std::uint64_t task_index) const {
  return std::mt19937_64(sub_seed(task_index));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> project_values(const SampleMatrix& samples, const Direction& theta) {
  if (theta.dim() != samples.dim())
    throw InputError("project: direction has dimension " + std::to_string(theta.dim()) +
                     ", samples have " + std::to_string(samples.dim()));
  std::vector<double> out(samples.rows());
  for (std::size_t i = 0; i < samples.rows(); ++i) out[i] = dot(samples.row(i), theta.components());
  return out;
}

Discrete1D project(const SampleMatrix& samples, const Direction& theta) {
  return Discrete1D::uniform(project_values(samples, theta));
}

double empirical_cdf(const Discrete1D& m, double t) {
  auto atoms = m.atoms();
  const auto it = std::upper_bound(atoms.begin(), atoms.end(), t);
  if (it == atoms.begin()) return 0.0;
  return m.cumulative()[static_cast<std::size_t>(it - atoms.begin()) - 1];
}

double quantile(const Discrete1D& m, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw InputError("quantile: tau must lie in (0, 1]");
  auto cum = m.cumulative();
  const auto it = std::lower_bound(cum.begin(), cum.end(), tau);
  const std::size_t idx = it == cum.end() ? cum.size() - 1 : static_cast<std::size_t>(it - cum.begin());
  return m.atoms()[idx];
}

std::vector<Direction> sample_sphere(std::size_t d, std::size_t k, const SeedPolicy& seed) {
  if (d == 0 || k == 0) throw InputError("sample_sphere: need d >= 1 and k >= 1");
  std::vector<Direction> out;
  out.reserve(k);
  if (d == 1) {
    for (std::size_t j = 0; j < k; ++j) out.emplace_back(std::vector<double>{j % 2 == 0 ? 1.0 : -1.0});
    return out;
  }
  for (std::size_t j = 0; j < k; ++j) {
    auto rng = seed.stream(j);
    std::normal_distribution<double> gauss;
    std::vector<double> v(d);
    double nrm = 0.0;
    do {
      for (double& x : v) x = gauss(rng);
      nrm = norm2(v);
    } while (!(nrm > 1e-300));
    out.push_back(Direction::normalized(std::move(v)));
  }
  return out;
}

}  // namespace rot
