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
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "miner/corpus.hpp"
#include "miner/error.hpp"
#include "miner/textprep.hpp"
#include "miner/timeparse.hpp"

namespace miner {

struct LexiconCategory {
  std::string name;
  std::unordered_set<std::string> literals;
  std::vector<std::string> prefixes;  // declared with a trailing '*'
};

struct LexiconSet {
  std::vector<LexiconCategory> categories;  // in configured order

  std::size_t size() const { return categories.size(); }
  std::vector<std::string> category_names() const {
    std::vector<std::string> names;
    for (const auto& c : categories) names.push_back(c.name);
    return names;
  }
};

inline const std::vector<std::string>& default_emotion_categories() {
  static const std::vector<std::string> names = {"positive_emotion", "negative_emotion",
                                                 "anxiety", "anger", "sadness"};
  return names;
}

// Lexicon file: one category per line, "category<TAB>entry<TAB>entry...".
// A trailing '*' marks a prefix pattern. Entries are case-folded.
inline LexiconSet load_lexicon(const std::string& path,
                               const std::vector<std::string>& expected =
                                   default_emotion_categories()) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open lexicon file " + path);
  std::map<std::string, LexiconCategory> parsed;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    while (start <= line.size()) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (fields.empty() || fields[0].empty()) continue;
    std::string name = detail::to_lower_copy(fields[0]);
    if (std::find(expected.begin(), expected.end(), name) == expected.end())
      throw ValidationError(path + ":" + std::to_string(lineno) + ": unknown category \"" +
                            name + "\"");
    LexiconCategory& cat = parsed.try_emplace(name, LexiconCategory{name, {}, {}}).first->second;
    for (size_t i = 1; i < fields.size(); ++i) {
      if (fields[i].empty()) continue;
      std::string entry = detail::to_lower_copy(fields[i]);
      bool prefix = entry.back() == '*';
      if (prefix) entry.pop_back();
      if (entry.empty()) continue;
      bool duplicate = prefix
                           ? std::find(cat.prefixes.begin(), cat.prefixes.end(), entry) !=
                                 cat.prefixes.end()
                           : cat.literals.count(entry) > 0;
      if (duplicate) {
        std::cerr << "lexicon warning: " << path << ":" << lineno << ": duplicate entry \""
                  << fields[i] << "\" in category " << name << "\n";
        continue;
      }
      if (prefix) cat.prefixes.push_back(entry);
      else cat.literals.insert(entry);
    }
  }
  if (parsed.empty()) throw ValidationError("lexicon file " + path + " has no categories");
  LexiconSet lex;
  for (const auto& name : expected) {
    auto it = parsed.find(name);
    if (it == parsed.end())
      throw ValidationError("lexicon file " + path + " is missing category \"" + name + "\"");
    if (it->second.literals.empty() && it->second.prefixes.empty())
      throw ValidationError("lexicon file " + path + ": category \"" + name + "\" is empty");
    lex.categories.push_back(it->second);
  }
  return lex;
}

struct EmotionScores {
  std::vector<double> pct;  // aligned with LexiconSet category order
  std::size_t token_count = 0;
};

namespace detail {

// Scoring tokens: maximal runs of letters plus apostrophes, lowercased.
inline std::vector<std::string> scoring_tokens(std::string_view text) {
  std::vector<char32_t> cps = decode_utf8(text);
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      tokens.push_back(cur);
      cur.clear();
    }
  };
  for (char32_t c : cps) {
    bool letter = is_ascii_letter(c) || (c >= 0x80 && is_token_char(c));
    if (letter || c == '\'' || c == 0x2019) {
      if (c == 0x2019) c = '\'';
      append_utf8(cur, ascii_lower(c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

}  // namespace detail

// Percentage of tokens hitting each category; a token may hit several
// categories (nested-dictionary behavior).
inline EmotionScores score(std::string_view text, const LexiconSet& lex) {
  std::vector<std::string> tokens = detail::scoring_tokens(text);
  EmotionScores out;
  out.token_count = tokens.size();
  out.pct.assign(lex.size(), 0.0);
  if (tokens.empty()) return out;
  for (size_t ci = 0; ci < lex.categories.size(); ++ci) {
    const LexiconCategory& cat = lex.categories[ci];
    size_t hits = 0;
    for (const auto& tok : tokens) {
      bool hit = cat.literals.count(tok) > 0;
      if (!hit) {
        for (const auto& pre : cat.prefixes) {
          if (tok.size() >= pre.size() && tok.compare(0, pre.size(), pre) == 0) {
            hit = true;
            break;
          }
        }
      }
      if (hit) ++hits;
    }
    out.pct[ci] = 100.0 * static_cast<double>(hits) / static_cast<double>(tokens.size());
  }
  return out;
}

struct GroupScoreRow {
  std::string group;
  std::size_t n = 0;
  std::vector<double> mean;
};

enum class ScoreGroupBy { month, state };

// Per-group arithmetic means of category percentages. State grouping needs
// the geocoder's id -> state map; posts without a state are excluded.
inline std::vector<GroupScoreRow> aggregate_scores(
    const std::vector<std::pair<const Post*, EmotionScores>>& items, ScoreGroupBy group_by,
    const std::map<std::string, std::string>* states = nullptr) {
  if (group_by == ScoreGroupBy::state && states == nullptr)
    throw ValidationError("aggregate_scores: state grouping requires a geo map");
  std::map<std::string, GroupScoreRow> groups;
  for (const auto& [post, scores] : items) {
    std::string key;
    if (group_by == ScoreGroupBy::month) {
      key = to_string(year_month_of(post->created_at));
    } else {
      auto it = states->find(post->id);
      if (it == states->end() || it->second.empty()) continue;
      key = it->second;
    }
    GroupScoreRow& row = groups.try_emplace(key, GroupScoreRow{key, 0, {}}).first->second;
    if (row.mean.empty()) row.mean.assign(scores.pct.size(), 0.0);
    ++row.n;
    for (size_t i = 0; i < scores.pct.size(); ++i) row.mean[i] += scores.pct[i];
  }
  std::vector<GroupScoreRow> out;
  for (auto& [key, row] : groups) {
    for (double& m : row.mean) m /= static_cast<double>(row.n);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace miner
