#include "rot/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <string_view>

#include "rot/error.hpp"

namespace rot::cli {

Kind parse_kind(const std::string& s) {
  if (s == "plain") return Kind::plain;
  if (s == "sliced-avg") return Kind::sliced_avg;
  if (s == "sliced-max") return Kind::sliced_max;
  if (s == "smooth") return Kind::smooth;
  if (s == "entropic") return Kind::entropic;
  throw InputError("unknown --kind '" + s + "' (plain, sliced-avg, sliced-max, smooth, entropic)");
}

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::plain: return "plain";
    case Kind::sliced_avg: return "sliced-avg";
    case Kind::sliced_max: return "sliced-max";
    case Kind::smooth: return "smooth";
    case Kind::entropic: return "entropic";
  }
  return "plain";
}

void RunConfig::validate_distance() const {
  if (!std::isfinite(p) || p < 1.0) throw InputError("--p must be >= 1");
  if (kind == Kind::smooth) {
    if (!sigma) throw InputError("--sigma is required for --kind smooth");
    if (!(*sigma > 0.0) || !std::isfinite(*sigma)) throw InputError("--sigma must be > 0");
    if (r < 1) throw InputError("--r must be >= 1");
  } else if (sigma) {
    throw InputError("--sigma only applies to --kind smooth");
  }
  if (kind == Kind::entropic) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("--eps must be > 0");
    if (p != 2.0) throw InputError("--kind entropic uses the quadratic cost; --p must be 2");
    if (max_iter < 1) throw InputError("--max-iter must be >= 1");
    if (!(tol > 0.0)) throw InputError("--tol must be > 0");
  }
  if ((kind == Kind::sliced_avg || kind == Kind::sliced_max) && k < 1) throw InputError("--k must be >= 1");
  if (x_path.empty() || y_path.empty()) throw InputError("two input CSV paths are required");
}

void RunConfig::validate_ci() const {
  validate_distance();
  if (!(level > 0.0 && level < 1.0)) throw InputError("--level must lie in (0, 1)");
  if (method != "auto" && method != "bootstrap" && method != "normal" && method != "subsample")
    throw InputError("unknown --method '" + method + "' (auto, bootstrap, normal, subsample)");
  if (method != "normal" && B < 100) throw InputError("--B must be >= 100");
  if (kind == Kind::sliced_max && (method == "bootstrap" || method == "normal"))
    throw InputError("the naive bootstrap and normal intervals are inconsistent for sliced-max; use subsample");
  if (m && *m < 2) throw InputError("--m must be >= 2");
}

void RunConfig::validate_clt() const {
  if (population != "eot-discrete" && population != "uniform-boxes" && population != "point-mass")
    throw InputError("unknown --population '" + population + "' (eot-discrete, uniform-boxes, point-mass)");
  if (n < 2) throw InputError("--n must be >= 2");
  if (R < 1) throw InputError("--R must be >= 1");
  if (!(level > 0.0 && level < 1.0)) throw InputError("--level must lie in (0, 1)");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("--eps must be > 0");
  if (population == "uniform-boxes" && (p <= 1.0 || !std::isfinite(p))) throw InputError("uniform-boxes needs --p > 1");
  if (population == "uniform-boxes" && k < 1) throw InputError("--k must be >= 1");
}

std::optional<int> resolve_threads(std::optional<int> flag, const char* env_value) {
  if (flag) {
    if (*flag < 1) throw InputError("--threads must be >= 1");
    return flag;
  }
  if (!env_value || !*env_value) return std::nullopt;
  const std::string_view s(env_value);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 1)
    throw InputError("ROT_INFER_THREADS must be a positive integer, got '" + std::string(s) + "'");
  return v;
}

}  // namespace rot::cli
