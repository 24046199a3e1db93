// Copyright 2026 The nhep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "format.hpp"

// Minimal SVG renderings of CSV data: line plots and heat maps.
namespace nhep::cli::svg {

struct Series {
  std::string name;
  std::vector<double> y;
};

namespace detail {

inline constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
inline const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

inline std::pair<double, double> range(const std::vector<double>& v) {
  double lo = INFINITY, hi = -INFINITY;
  for (double x : v)
    if (std::isfinite(x)) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  if (!std::isfinite(lo)) return {0.0, 1.0};
  if (hi == lo) return {lo - 0.5, hi + 0.5};
  return {lo, hi};
}

inline std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

inline void frame(std::ostringstream& os, const std::string& title, const std::string& xlabel, const std::string& ylabel,
                  std::pair<double, double> xr, std::pair<double, double> yr) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
     << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight << "\" height=\""
     << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">" << escape(xlabel)
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kHeight / 2
     << ")\">" << escape(ylabel) << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xr.first + (xr.second - xr.first) * i / 4.0;
    const double fy = yr.first + (yr.second - yr.first) * i / 4.0;
    const double px = kLeft + (kWidth - kLeft - kRight) * i / 4.0;
    const double py = kHeight - kBottom - (kHeight - kTop - kBottom) * i / 4.0;
    os << "<text x=\"" << fmt(px) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
       << fmt(std::round(fx * 1e4) / 1e4) << "</text>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(py + 4) << "\" text-anchor=\"end\">"
       << fmt(std::round(fy * 1e4) / 1e4) << "</text>\n";
  }
}

}  // namespace detail

inline std::string line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                             const std::vector<double>& x, const std::vector<Series>& series) {
  using namespace detail;
  std::vector<double> all;
  for (const auto& s : series) all.insert(all.end(), s.y.begin(), s.y.end());
  const auto xr = range(x), yr = range(all);
  std::ostringstream os;
  frame(os, title, xlabel, ylabel, xr, yr);
  const double w = kWidth - kLeft - kRight, h = kHeight - kTop - kBottom;
  for (std::size_t k = 0; k < series.size(); ++k) {
    os << "<polyline fill=\"none\" stroke=\"" << kColors[k % 6] << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < x.size() && i < series[k].y.size(); ++i) {
      if (!std::isfinite(series[k].y[i])) continue;
      const double px = kLeft + w * (x[i] - xr.first) / (xr.second - xr.first);
      const double py = kTop + h * (1.0 - (series[k].y[i] - yr.first) / (yr.second - yr.first));
      os << (first ? "" : " ") << fmt(std::round(px * 100) / 100) << ',' << fmt(std::round(py * 100) / 100);
      first = false;
    }
    os << "\"/>\n";
    os << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 16 + 14 * k << "\" fill=\"" << kColors[k % 6] << "\">"
       << escape(series[k].name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

/// z is row-major with rows along y and columns along x; values mapped to a
/// white-to-blue ramp over their range.
inline std::string heat_map(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                            const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& z) {
  using namespace detail;
  const auto xr = range(x), yr = range(y), zr = range(z);
  std::ostringstream os;
  frame(os, title, xlabel, ylabel, xr, yr);
  const double w = kWidth - kLeft - kRight, h = kHeight - kTop - kBottom;
  const double cw = w / std::max<std::size_t>(1, x.size()), ch = h / std::max<std::size_t>(1, y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double v = z[i * x.size() + j];
      const double f = std::isfinite(v) ? (v - zr.first) / (zr.second - zr.first) : 0.0;
      const int r = static_cast<int>(std::lround(255 * (1 - f))), g = static_cast<int>(std::lround(255 * (1 - 0.7 * f)));
      os << "<rect x=\"" << fmt(std::round((kLeft + j * cw) * 100) / 100) << "\" y=\""
         << fmt(std::round((kTop + h - (i + 1) * ch) * 100) / 100) << "\" width=\"" << fmt(std::ceil(cw * 100) / 100)
         << "\" height=\"" << fmt(std::ceil(ch * 100) / 100) << "\" fill=\"rgb(" << r << ',' << g << ",255)\"/>\n";
    }
  os << "</svg>\n";
  return os.str();
}

}  // namespace nhep::cli::svg
