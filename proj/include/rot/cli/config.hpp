#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace rot::cli {

enum class Kind { plain, sliced_avg, sliced_max, smooth, entropic };

Kind parse_kind(const std::string& s);
std::string kind_name(Kind k);

/// Everything a subcommand needs, filled from the command line.
struct RunConfig {
  Kind kind = Kind::plain;
  double p = 2.0;
  std::optional<double> sigma;
  double eps = 1.0;
  std::size_t max_iter = 100000;  // Sinkhorn
  double tol = 1e-9;
  std::size_t k = 100;  // directions
  std::size_t r = 20;   // noise reps
  std::size_t B = 400;
  std::optional<std::size_t> m;  // subsample size
  std::uint64_t seed = 0;
  double level = 0.95;
  std::string x_path;
  std::string y_path;
  std::string out_path;  // empty = stdout

  std::string method = "auto";  // ci: auto | bootstrap | normal | subsample

  std::string population;  // clt: eot-discrete | uniform-boxes | point-mass
  std::size_t n = 1000;
  std::size_t R = 300;
  std::string plot_dir = ".";

  bool timing = true;
  bool verbose = false;

  /// Throws InputError when a kind-specific parameter is missing or out of range.
  void validate_distance() const;
  void validate_ci() const;
  void validate_clt() const;
};

/// Worker count from --threads, falling back to ROT_INFER_THREADS; nullopt
/// leaves the OpenMP default alone.
std::optional<int> resolve_threads(std::optional<int> flag, const char* env_value);

}  // namespace rot::cli
