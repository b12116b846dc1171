#include "rot/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "rot/inference.hpp"

namespace rot::cli {

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

// Maps data coordinates to the plot area.
struct Frame {
  double x0, x1, y0, y1;
  double sx(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double sy(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

std::string open_svg(const std::string& title, const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
       "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" + escape(title) +
       "</text>\n";
  // axes
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" + num(kWidth - kRight) +
       "\" y2=\"" + num(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
       num(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
  const double xs = nice_step(f.x1 - f.x0, 8);
  for (double t = std::ceil(f.x0 / xs) * xs; t <= f.x1 + 1e-9; t += xs) {
    s += "<line x1=\"" + num(f.sx(t)) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" + num(f.sx(t)) +
         "\" y2=\"" + num(kHeight - kBottom + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(f.sx(t)) + "\" y=\"" + num(kHeight - kBottom + 18) + "\" text-anchor=\"middle\">" +
         tick_label(t) + "</text>\n";
  }
  const double ys = nice_step(f.y1 - f.y0, 6);
  for (double t = std::ceil(f.y0 / ys) * ys; t <= f.y1 + 1e-9; t += ys) {
    s += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(f.sy(t)) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
         num(f.sy(t)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(f.sy(t) + 4) + "\" text-anchor=\"end\">" + tick_label(t) +
         "</text>\n";
  }
  s += "<text x=\"" + num((kLeft + kWidth - kRight) / 2) + "\" y=\"" + num(kHeight - 12) +
       "\" text-anchor=\"middle\">" + escape(xlabel) + "</text>\n";
  s += "<text x=\"16\" y=\"" + num((kTop + kHeight - kBottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       num((kTop + kHeight - kBottom) / 2) + ")\">" + escape(ylabel) + "</text>\n";
  return s;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

std::string histogram_svg(std::span<const double> values, const std::string& title) {
  double lo = -4.0, hi = 4.0;
  for (double v : values) {
    lo = std::min(lo, std::floor(v));
    hi = std::max(hi, std::ceil(v));
  }
  const std::size_t n = values.size();
  const std::size_t bins =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(2.0 * std::cbrt(static_cast<double>(n)))) *
                                  static_cast<std::size_t>(std::max(1.0, (hi - lo) / 8.0)),
                              8, 80);
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<double> counts(bins, 0.0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    counts[std::min(b, bins - 1)] += 1.0;
  }
  double top = normal_pdf(0.0);
  for (auto& c : counts) {
    c /= std::max<double>(1.0, static_cast<double>(n)) * width;
    top = std::max(top, c);
  }
  const Frame f{lo, hi, 0.0, top * 1.1};
  std::string s = open_svg(title, f, "standardized value", "density");
  for (std::size_t b = 0; b < bins; ++b) {
    if (counts[b] <= 0.0) continue;
    const double x = lo + width * static_cast<double>(b);
    s += "<rect x=\"" + num(f.sx(x)) + "\" y=\"" + num(f.sy(counts[b])) + "\" width=\"" +
         num(f.sx(x + width) - f.sx(x)) + "\" height=\"" + num(f.sy(0.0) - f.sy(counts[b])) +
         "\" fill=\"#9ecae1\" stroke=\"#3182bd\" stroke-width=\"0.5\"/>\n";
  }
  s += "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"";
  const int steps = 200;
  for (int i = 0; i <= steps; ++i) {
    const double x = lo + (hi - lo) * i / steps;
    s += num(f.sx(x)) + "," + num(f.sy(normal_pdf(x))) + (i < steps ? " " : "");
  }
  s += "\"/>\n";
  s += "<text x=\"" + num(kWidth - kRight - 4) + "\" y=\"" + num(kTop + 14) +
       "\" text-anchor=\"end\" fill=\"#d62728\">N(0,1) density</text>\n";
  s += "<text x=\"" + num(kWidth - kRight - 4) + "\" y=\"" + num(kTop + 30) + "\" text-anchor=\"end\">R = " +
       std::to_string(n) + "</text>\n";
  s += "</svg>\n";
  return s;
}

std::string qq_svg(std::span<const double> values, const std::string& title) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) q[i] = normal_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
  double lo = -3.5, hi = 3.5;
  for (std::size_t i = 0; i < n; ++i) {
    lo = std::min({lo, std::floor(v[i]), std::floor(q[i])});
    hi = std::max({hi, std::ceil(v[i]), std::ceil(q[i])});
  }
  const Frame f{lo, hi, lo, hi};
  std::string s = open_svg(title, f, "standard normal quantile", "sample quantile");
  s += "<line x1=\"" + num(f.sx(lo)) + "\" y1=\"" + num(f.sy(lo)) + "\" x2=\"" + num(f.sx(hi)) + "\" y2=\"" +
       num(f.sy(hi)) + "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
  for (std::size_t i = 0; i < n; ++i)
    s += "<circle cx=\"" + num(f.sx(q[i])) + "\" cy=\"" + num(f.sy(v[i])) +
         "\" r=\"2.5\" fill=\"#3182bd\" fill-opacity=\"0.7\"/>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace rot::cli
