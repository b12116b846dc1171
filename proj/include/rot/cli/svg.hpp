#pragma once

#include <span>
#include <string>

namespace rot::cli {

/// Density histogram of standardized values with the N(0,1) density on top.
std::string histogram_svg(std::span<const double> values, const std::string& title);

/// Sample quantiles against standard normal quantiles, with the y = x line.
std::string qq_svg(std::span<const double> values, const std::string& title);

}  // namespace rot::cli
