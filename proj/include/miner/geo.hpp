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

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "miner/csv.hpp"
#include "miner/error.hpp"
#include "miner/geo_data.hpp"
#include "miner/sentiment.hpp"

namespace miner {

namespace detail {

inline const std::unordered_map<std::string, std::string>& state_code_map() {
  static const std::unordered_map<std::string, std::string> m = [] {
    std::unordered_map<std::string, std::string> codes;
    for (size_t i = 0; i < data::kStateCount; ++i) {
      std::string lower = data::kStates[i].code;
      for (char& c : lower) c = static_cast<char>(c + 32);
      codes.emplace(lower, data::kStates[i].code);
    }
    return codes;
  }();
  return m;
}

inline const std::unordered_set<std::string>& valid_state_codes() {
  static const std::unordered_set<std::string> s = [] {
    std::unordered_set<std::string> codes;
    for (size_t i = 0; i < data::kStateCount; ++i) codes.insert(data::kStates[i].code);
    return codes;
  }();
  return s;
}

// Normalizes a place name to its word sequence: lowercase alnum runs.
inline std::vector<std::string> place_words(std::string_view place) {
  std::vector<std::string> words;
  std::string cur;
  for (char ch : place) {
    char c = ch >= 'A' && ch <= 'Z' ? static_cast<char>(ch + 32) : ch;
    bool word_char = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    if (word_char) {
      cur.push_back(c);
    } else if (!cur.empty()) {
      words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

inline std::string join_words(const std::vector<std::string>& words, size_t from, size_t len) {
  std::string out;
  for (size_t i = from; i < from + len; ++i) {
    if (i > from) out.push_back(' ');
    out += words[i];
  }
  return out;
}

}  // namespace detail

// Place-name lookup tables, split by precedence tier: explicit state codes
// beat full state names beat city inference.
struct Gazetteer {
  std::unordered_map<std::string, std::string> names;   // "florida" -> "FL"
  std::unordered_map<std::string, std::string> cities;  // "gainesville" -> ...
  std::size_t max_name_words = 1;
  std::size_t max_city_words = 1;

  void add_entry(const std::string& place, const std::string& code) {
    auto words = detail::place_words(place);
    if (words.empty()) return;
    std::string key = detail::join_words(words, 0, words.size());
    bool dc_alias = code == "DC" && key.find("washington") != std::string::npos;
    bool is_state_name = false;
    for (size_t i = 0; i < data::kStateCount; ++i)
      if (key == data::kStates[i].name) is_state_name = true;
    if (is_state_name || dc_alias) {
      names[key] = code;
      max_name_words = std::max(max_name_words, words.size());
    } else {
      cities[key] = code;
      max_city_words = std::max(max_city_words, words.size());
    }
  }
};

inline const Gazetteer& builtin_gazetteer() {
  static const Gazetteer gaz = [] {
    Gazetteer g;
    for (size_t i = 0; i < data::kStateCount; ++i)
      g.add_entry(data::kStates[i].name, data::kStates[i].code);
    for (size_t i = 0; i < data::kCityCount; ++i)
      g.add_entry(data::kCities[i].name, data::kCities[i].code);
    return g;
  }();
  return gaz;
}

// Gazetteer file: CSV place_name,state_code (no header required; a header
// row "place_name,state_code" is tolerated).
inline Gazetteer load_gazetteer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open gazetteer file " + path);
  Gazetteer g;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = parse_csv_line(line);
    if (fields.size() != 2)
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": expected place_name,state_code");
    if (lineno == 1 && fields[0] == "place_name") continue;
    std::string code = fields[1];
    for (char& c : code)
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
    if (!detail::valid_state_codes().count(code))
      throw ValidationError(path + ":" + std::to_string(lineno) + ": unknown state code \"" +
                            fields[1] + "\"");
    g.add_entry(fields[0], code);
  }
  if (g.names.empty() && g.cities.empty())
    throw ValidationError("gazetteer file " + path + " has no entries");
  return g;
}

struct StateAssignment {
  std::string post_id;
  std::optional<std::string> state;
  std::string matched_on;
};

struct GeoMatch {
  std::string state;
  std::string matched_on;
};

// Deterministic free-text resolution. A state-code token counts only when
// it is uppercase in the original string or stands alone after a comma;
// ambiguous city names are simply absent from the gazetteer, so they
// abstain. Longer entries are tried before shorter ones.
inline std::optional<GeoMatch> geocode(std::string_view location, const Gazetteer& gaz) {
  if (location.empty()) return std::nullopt;

  // split into comma segments, tracking original casing per token
  struct Token {
    std::string lower;
    bool all_upper;
    size_t segment;
  };
  std::vector<Token> tokens;
  size_t segment = 0;
  std::vector<size_t> segment_sizes{0};
  {
    std::string lower, orig;
    auto flush = [&] {
      if (!lower.empty()) {
        bool upper = !orig.empty();
        for (char c : orig)
          if (!(c >= 'A' && c <= 'Z')) upper = false;
        tokens.push_back(Token{lower, upper, segment});
        ++segment_sizes.back();
        lower.clear();
        orig.clear();
      }
    };
    for (char ch : location) {
      if (ch == ',') {
        flush();
        ++segment;
        segment_sizes.push_back(0);
        continue;
      }
      char c = ch >= 'A' && ch <= 'Z' ? static_cast<char>(ch + 32) : ch;
      if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
        lower.push_back(c);
        orig.push_back(ch);
      } else {
        flush();
      }
    }
    flush();
  }
  if (tokens.empty()) return std::nullopt;

  // tier 1: explicit state codes
  for (const Token& t : tokens) {
    if (t.lower.size() != 2) continue;
    auto it = detail::state_code_map().find(t.lower);
    if (it == detail::state_code_map().end()) continue;
    bool lone_tail_segment = t.segment > 0 && segment_sizes[t.segment] == 1;
    if (t.all_upper || lone_tail_segment) return GeoMatch{it->second, it->second};
  }

  std::vector<std::string> words;
  for (const Token& t : tokens) words.push_back(t.lower);
  auto scan = [&](const std::unordered_map<std::string, std::string>& entries,
                  size_t max_words) -> std::optional<GeoMatch> {
    for (size_t len = std::min(max_words, words.size()); len >= 1; --len) {
      for (size_t start = 0; start + len <= words.size(); ++start) {
        std::string key = detail::join_words(words, start, len);
        auto it = entries.find(key);
        if (it != entries.end()) return GeoMatch{it->second, key};
      }
    }
    return std::nullopt;
  };

  // tier 2: full state names; tier 3: cities
  if (auto m = scan(gaz.names, gaz.max_name_words)) return m;
  if (auto m = scan(gaz.cities, gaz.max_city_words)) return m;
  return std::nullopt;
}

inline std::vector<StateAssignment> geocode_posts(const Corpus& corpus, const Gazetteer& gaz) {
  std::vector<StateAssignment> out;
  out.reserve(corpus.posts.size());
  for (const Post& p : corpus.posts) {
    StateAssignment a;
    a.post_id = p.id;
    if (p.author_location) {
      if (auto m = geocode(*p.author_location, gaz)) {
        a.state = m->state;
        a.matched_on = m->matched_on;
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

struct StateRow {
  std::string state;
  std::size_t n = 0;
  std::vector<double> mean;
};

// Per-state emotion means for heatmap export; unassigned posts are
// excluded, states never seen are absent, rows sorted by state code.
inline std::vector<StateRow> state_table(const std::vector<StateAssignment>& assignments,
                                         const std::vector<std::pair<std::string, EmotionScores>>&
                                             scores) {
  std::unordered_map<std::string, const StateAssignment*> by_id;
  for (const auto& a : assignments) by_id.emplace(a.post_id, &a);
  std::vector<std::string> missing;
  std::map<std::string, StateRow> rows;
  for (const auto& [id, sc] : scores) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      missing.push_back(id);
      if (missing.size() >= 10) break;
      continue;
    }
    if (!it->second->state) continue;
    StateRow& row = rows.try_emplace(*it->second->state, StateRow{*it->second->state, 0, {}})
                        .first->second;
    if (row.mean.empty()) row.mean.assign(sc.pct.size(), 0.0);
    ++row.n;
    for (size_t i = 0; i < sc.pct.size(); ++i) row.mean[i] += sc.pct[i];
  }
  if (!missing.empty()) {
    std::string msg = "state_table: scores without assignments for ids:";
    for (const auto& id : missing) msg += " " + id;
    throw ValidationError(msg);
  }
  std::vector<StateRow> out;
  for (auto& [code, row] : rows) {
    for (double& m : row.mean) m /= static_cast<double>(row.n);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace miner
