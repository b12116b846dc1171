#pragma once

#include <string>

#include "json.hpp"

namespace rot::cli {

using Json = nlohmann::ordered_json;

/// Serialize with insertion-ordered keys and every float as %.17g.
std::string dump_json(const Json& j, int indent = 2);

/// %.17g, with non-finite values mapped to null.
std::string format_double(double v);

}  // namespace rot::cli
