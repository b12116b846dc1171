#pragma once

#include <iosfwd>
#include <string>

#include "rot/measures.hpp"

namespace rot {

/// One observation per row, comma-separated decimals. A first row whose
/// first token is not numeric is treated as a header and skipped.
SampleMatrix read_csv(std::istream& in);
SampleMatrix read_csv_file(const std::string& path);

void write_csv(std::ostream& out, const SampleMatrix& samples, int precision = 17);

}  // namespace rot
