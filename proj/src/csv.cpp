#include "rot/csv.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "rot/error.hpp"

namespace rot {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view tok, double& out) {
  tok = trim(tok);
  if (tok.empty()) return false;
  if (tok.front() == '+') tok.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

SampleMatrix read_csv(std::istream& in) {
  std::string line;
  std::vector<double> data;
  std::size_t d = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = trim(line);
    if (line_no == 1 && sv.size() >= 3 && sv.substr(0, 3) == "\xEF\xBB\xBF") sv.remove_prefix(3);
    if (sv.empty()) continue;
    const auto toks = split(sv);
    if (first_content) {
      first_content = false;
      double probe;
      if (!parse_double(toks.front(), probe)) continue;  // header row
    }
    if (d == 0) d = toks.size();
    if (toks.size() != d)
      throw InputError("csv line " + std::to_string(line_no) + ": expected " + std::to_string(d) +
                       " fields, got " + std::to_string(toks.size()));
    for (auto t : toks) {
      double v;
      if (!parse_double(t, v))
        throw InputError("csv line " + std::to_string(line_no) + ": cannot parse '" + std::string(t) + "'");
      data.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw InputError("csv: no data rows");
  return SampleMatrix(rows, d, std::move(data));
}

SampleMatrix read_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open '" + path + "'");
  return read_csv(f);
}

void write_csv(std::ostream& out, const SampleMatrix& samples, int precision) {
  std::ostringstream buf;
  buf << std::setprecision(precision);
  for (std::size_t i = 0; i < samples.rows(); ++i) {
    for (std::size_t j = 0; j < samples.dim(); ++j) {
      if (j) buf << ',';
      buf << samples(i, j);
    }
    buf << '\n';
  }
  out << buf.str();
}

}  // namespace rot
