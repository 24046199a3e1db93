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

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nhep/errors.hpp"

namespace nhep::cli {

/// 12 significant digits, '.' separator, independent of the global locale;
/// "nan" for undefined values.
inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, r.ptr);
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) { row_strings(header); }

  void row(const std::vector<double>& values) {
    std::vector<std::string> s;
    s.reserve(values.size());
    for (double v : values) s.push_back(fmt(v));
    row_strings(s);
  }

  void row_strings(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) throw Error("CsvWriter: row width does not match header");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::size_t columns_;
  std::ostringstream out_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InvalidArgument("cannot write output file " + path.string());
  f << content;
  if (!f) throw InvalidArgument("failed writing output file " + path.string());
}

/// Compact token for file names: 0.5 -> "0.5", 5 -> "5".
inline std::string tag(double v) { return fmt(v); }

}  // namespace nhep::cli
