#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rot/cli/config.hpp"
#include "rot/cli/json_out.hpp"

namespace rot::cli {

using Log = std::function<void(const std::string&)>;

Json cmd_dist(const RunConfig& cfg, const Log& log);
Json cmd_ci(const RunConfig& cfg, const Log& log);
/// Writes the replicate CSV and (unless degenerate) the two SVG plots into
/// cfg.plot_dir; returns the report.
Json cmd_clt(const RunConfig& cfg, const Log& log);

struct SelftestRow {
  std::string check;
  std::size_t instances = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};
std::vector<SelftestRow> run_selftest(std::uint64_t seed);
/// Prints the table; returns 0 iff every check passed.
int cmd_selftest(std::uint64_t seed, std::ostream& out);

/// Full command-line entry point; returns the process exit code
/// (0 ok, 2 bad input, 3 numerical failure).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rot::cli
