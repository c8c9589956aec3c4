// Copyright 2026 The discourse-miner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "miner/error.hpp"

namespace miner {

// Run configuration: a sectioned key = value file, captured verbatim into
// every stage manifest.
class RunConfig {
 public:
  static RunConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path);
    RunConfig cfg;
    cfg.path_ = path;
    std::string line, section;
    size_t lineno = 0;
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t");
      if (a == std::string::npos) return std::string();
      size_t b = s.find_last_not_of(" \t");
      return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[') {
        if (t.back() != ']')
          throw ValidationError(path + ":" + std::to_string(lineno) + ": unterminated section");
        section = trim(t.substr(1, t.size() - 2));
        if (section.empty())
          throw ValidationError(path + ":" + std::to_string(lineno) + ": empty section name");
        cfg.sections_.try_emplace(section);
        continue;
      }
      size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key = value");
      std::string key = trim(t.substr(0, eq));
      std::string value = trim(t.substr(eq + 1));
      if (key.empty())
        throw ValidationError(path + ":" + std::to_string(lineno) + ": empty key");
      cfg.sections_[section][key] = value;
    }
    return cfg;
  }

  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

  const std::string& path() const { return path_; }

  std::optional<std::string> find(const std::string& section, const std::string& key) const {
    auto sit = sections_.find(section);
    if (sit == sections_.end()) return std::nullopt;
    auto kit = sit->second.find(key);
    if (kit == sit->second.end() || kit->second.empty()) return std::nullopt;
    return kit->second;
  }

  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const {
    auto v = find(section, key);
    return v ? *v : fallback;
  }

  std::string require(const std::string& section, const std::string& key) const {
    auto v = find(section, key);
    if (!v) throw ValidationError("config " + path_ + " is missing [" + section + "] " + key);
    return *v;
  }

  long long get_int(const std::string& section, const std::string& key, long long fallback) const {
    auto v = find(section, key);
    if (!v) return fallback;
    try {
      return std::stoll(*v);
    } catch (...) {
      throw ValidationError("config [" + section + "] " + key + ": not an integer: " + *v);
    }
  }

  double get_double(const std::string& section, const std::string& key, double fallback) const {
    auto v = find(section, key);
    if (!v) return fallback;
    try {
      return std::stod(*v);
    } catch (...) {
      throw ValidationError("config [" + section + "] " + key + ": not a number: " + *v);
    }
  }

  bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
    auto v = find(section, key);
    if (!v) return fallback;
    if (*v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "false" || *v == "no" || *v == "0") return false;
    throw ValidationError("config [" + section + "] " + key + ": not a boolean: " + *v);
  }

  // Multi-valued: comma- or whitespace-separated.
  std::vector<std::string> get_list(const std::string& section, const std::string& key) const {
    std::vector<std::string> out;
    auto v = find(section, key);
    if (!v) return out;
    std::string cur;
    for (char c : *v) {
      if (c == ',' || c == ' ' || c == '\t') {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
  }

  std::string out_dir() const {
    if (out_dir_override_) return *out_dir_override_;
    return get("output", "dir", "out");
  }

  void set_out_dir(std::string dir) { out_dir_override_ = std::move(dir); }

  std::optional<std::uint64_t> seed_override() const { return seed_override_; }
  void set_seed_override(std::uint64_t seed) { seed_override_ = seed; }

 private:
  std::string path_;
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::optional<std::string> out_dir_override_;
  std::optional<std::uint64_t> seed_override_;
};

inline void require_file(const std::string& path, const std::string& hint) {
  if (!std::filesystem::exists(path))
    throw ValidationError("missing expected file " + path + " (" + hint + ")");
}

}  // namespace miner
