// Copyright 2026 The fedchi2 Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Minimal key=value configuration files for the command-line harness.
//
// Format, line by line:
//   * '#' starts a comment that runs to the end of the line;
//   * blank lines (after comment stripping) are ignored;
//   * everything else must be `key = value` (the '=' is mandatory, spaces
//     around it optional); keys are [A-Za-z0-9_.-]+;
//   * duplicate keys are an error, so a typo cannot silently shadow a value;
//   * list values are comma-separated ("10,50,200").
//
// Typed getters either convert the stored string or return the supplied
// default when the key is absent; malformed values throw ConfigError with the
// offending key in the message.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fedchi2 {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  return std::all_of(key.begin(), key.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

}  // namespace detail

class ConfigFile {
 public:
  ConfigFile() = default;

  static ConfigFile parse_string(std::string_view text, const std::string& origin = "<string>") {
    ConfigFile cfg;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t eol = std::min(text.find('\n', pos), text.size());
      std::string_view line = text.substr(pos, eol - pos);
      ++lineno;
      pos = eol + 1;
      if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": expected `key = value`, got `" + std::string(line) + "`");
      const std::string key(detail::trim(line.substr(0, eq)));
      const std::string value(detail::trim(line.substr(eq + 1)));
      if (!detail::valid_key(key))
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": bad key `" + key + "`");
      if (cfg.values_.count(key) != 0)
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key `" + key +
                          "`");
      cfg.values_.emplace(key, value);
    }
    return cfg;
  }

  static ConfigFile parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::map<std::string, std::string>& entries() const { return values_; }

  // Rejects keys outside `allowed`, so a misspelled option fails loudly
  // instead of silently running with the default.
  void require_known(const std::vector<std::string>& allowed) const {
    for (const auto& [key, value] : values_) {
      (void)value;
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw ConfigError("unknown config key `" + key + "`");
    }
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_u64(key, it->second);
  }

  std::int64_t get_i64(const std::string& key, std::int64_t fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : parse_i64(key, it->second);
  }

  int get_int(const std::string& key, int fallback) const {
    const std::int64_t v = get_i64(key, fallback);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
      throw ConfigError("config key `" + key + "` is out of int range");
    return static_cast<int>(v);
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t used = 0;
      const double v = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing characters");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config key `" + key + "` is not a number: `" + it->second + "`");
    }
  }

  bool get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key `" + key + "` is not a boolean: `" + v + "`");
  }

  std::vector<int> get_int_list(const std::string& key, std::vector<int> fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<int> out;
    for (const auto& item : split_csv(key, it->second)) {
      const std::int64_t v = parse_i64(key, item);
      if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ConfigError("config key `" + key + "` has an out-of-range entry");
      out.push_back(static_cast<int>(v));
    }
    return out;
  }

  std::vector<std::string> get_string_list(const std::string& key,
                                           std::vector<std::string> fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return split_csv(key, it->second);
  }

 private:
  static std::vector<std::string> split_csv(const std::string& key, std::string_view value) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
      const std::size_t comma = std::min(value.find(',', pos), value.size());
      const std::string item(detail::trim(value.substr(pos, comma - pos)));
      if (item.empty())
        throw ConfigError("config key `" + key + "` has an empty list entry");
      out.push_back(item);
      if (comma == value.size()) break;
      pos = comma + 1;
    }
    if (out.empty()) throw ConfigError("config key `" + key + "` has an empty list");
    return out;
  }

  static std::uint64_t parse_u64(const std::string& key, std::string_view value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
      throw ConfigError("config key `" + key + "` is not an unsigned integer: `" +
                        std::string(value) + "`");
    return v;
  }

  static std::int64_t parse_i64(const std::string& key, std::string_view value) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
      throw ConfigError("config key `" + key + "` is not an integer: `" + std::string(value) +
                        "`");
    return v;
  }

  std::map<std::string, std::string> values_;
};

}  // namespace fedchi2
