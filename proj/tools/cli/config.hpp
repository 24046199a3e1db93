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
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nhep/errors.hpp"

namespace nhep::cli {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

/// Reads one command block of a config document. Every accessor records the
/// value actually used (default or supplied) into `resolved`; finish()
/// rejects keys that no accessor asked for.
class Block {
 public:
  Block(const json& source, std::string name) : source_(source), name_(std::move(name)) {
    if (!source_.is_null() && !source_.is_object()) fail("", "must be an object");
  }

  double number(const std::string& key, double fallback) {
    const double v = has(key) ? as_number(key, at(key)) : fallback;
    resolved_[key] = v;
    return v;
  }

  std::optional<double> nullable_number(const std::string& key, std::optional<double> fallback) {
    std::optional<double> v = fallback;
    if (has(key)) v = at(key).is_null() ? std::nullopt : std::optional<double>(as_number(key, at(key)));
    resolved_[key] = v ? json(*v) : json(nullptr);
    return v;
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    std::int64_t v = fallback;
    if (has(key)) v = as_integer(key, at(key));
    resolved_[key] = v;
    return v;
  }

  std::optional<std::int64_t> nullable_integer(const std::string& key, std::optional<std::int64_t> fallback) {
    std::optional<std::int64_t> v = fallback;
    if (has(key)) v = at(key).is_null() ? std::nullopt : std::optional<std::int64_t>(as_integer(key, at(key)));
    resolved_[key] = v ? json(*v) : json(nullptr);
    return v;
  }

  bool boolean(const std::string& key, bool fallback) {
    bool v = fallback;
    if (has(key)) {
      if (!at(key).is_boolean()) fail(key, "must be true or false");
      v = at(key).get<bool>();
    }
    resolved_[key] = v;
    return v;
  }

  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) {
    std::vector<double> v = fallback;
    if (has(key)) {
      if (!at(key).is_array()) fail(key, "must be an array of numbers");
      v.clear();
      for (const auto& e : at(key)) v.push_back(as_number(key, e));
    }
    resolved_[key] = v;
    return v;
  }

  void finish() const {
    if (!source_.is_object()) return;
    for (auto it = source_.begin(); it != source_.end(); ++it)
      if (!used_.count(it.key())) fail(it.key(), "unknown field");
  }

  const json& resolved() const { return resolved_; }
  const std::string& name() const { return name_; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw InvalidArgument("config: " + name_ + (key.empty() ? "" : "." + key) + " " + what);
  }

 private:
  bool has(const std::string& key) {
    used_.insert(key);
    return source_.is_object() && source_.contains(key);
  }
  const json& at(const std::string& key) const { return source_.at(key); }

  double as_number(const std::string& key, const json& v) const {
    if (!v.is_number()) fail(key, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "must be finite");
    return d;
  }
  std::int64_t as_integer(const std::string& key, const json& v) const {
    if (!v.is_number_integer()) fail(key, "must be an integer");
    return v.get<std::int64_t>();
  }

  const json& source_;
  std::string name_;
  std::set<std::string> used_;
  json resolved_ = json::object();
};

/// Parsed config document with the top-level schema checks applied.
struct ConfigDocument {
  json root = json::object();
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> threads;

  static ConfigDocument parse(const std::string& text, const std::vector<std::string>& command_blocks) {
    ConfigDocument doc;
    try {
      doc.root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InvalidArgument(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.root.is_object()) throw InvalidArgument("config: top level must be an object");
    if (!doc.root.contains("schema_version")) throw InvalidArgument("config: missing schema_version");
    const auto& ver = doc.root.at("schema_version");
    if (!ver.is_string() || ver.get<std::string>() != kSchemaVersion)
      throw InvalidArgument(std::string("config: schema_version must be \"") + kSchemaVersion + "\"");
    for (auto it = doc.root.begin(); it != doc.root.end(); ++it) {
      const std::string& k = it.key();
      if (k == "schema_version") continue;
      if (k == "seed") {
        if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0))
          throw InvalidArgument("config: seed must be a non-negative integer");
        doc.seed = it->get<std::uint64_t>();
      } else if (k == "threads") {
        if (!it->is_number_integer() || it->get<std::int64_t>() < 0)
          throw InvalidArgument("config: threads must be a non-negative integer");
        doc.threads = it->get<std::int64_t>();
      } else if (std::find(command_blocks.begin(), command_blocks.end(), k) == command_blocks.end()) {
        throw InvalidArgument("config: unknown field " + k);
      }
    }
    return doc;
  }

  static ConfigDocument load(const std::filesystem::path& path, const std::vector<std::string>& command_blocks) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("config: cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), command_blocks);
  }

  const json& block(const std::string& name) const {
    static const json empty;
    return root.contains(name) ? root.at(name) : empty;
  }
};

/// Uniform grid lo, lo + step, ..., up to hi (inclusive within rounding).
inline std::vector<double> uniform_grid(double lo, double hi, double step, const std::string& what) {
  if (!(step > 0.0)) throw InvalidArgument(what + ": step must be > 0");
  if (!(hi >= lo)) throw InvalidArgument(what + ": max must be >= min");
  const double span = (hi - lo) / step;
  if (span > 1e6) throw InvalidArgument(what + ": grid has more than 1e6 points");
  const auto n = static_cast<std::int64_t>(std::floor(span + 1e-9));
  std::vector<double> out;
  for (std::int64_t i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

/// `count` points from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, std::int64_t count, const std::string& what) {
  if (count < 1 || count > 1000000) throw InvalidArgument(what + ": point count must be in [1, 1e6]");
  if (count == 1) return {lo};
  std::vector<double> out;
  for (std::int64_t i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
  return out;
}

}  // namespace nhep::cli
