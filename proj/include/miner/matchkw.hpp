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
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "miner/corpus.hpp"
#include "miner/error.hpp"
#include "miner/textprep.hpp"

namespace miner {

struct MatchToken {
  std::string body;  // lowercase, '#' stripped
  bool hashtag = false;
};

namespace detail {

// Word tokens for matching; a '#' prefixing a word marks it as a hashtag.
inline std::vector<MatchToken> tokenize_for_match(std::string_view text) {
  std::vector<char32_t> cps = decode_utf8(text);
  std::vector<MatchToken> out;
  std::string cur;
  bool cur_hashtag = false;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(MatchToken{std::move(cur), cur_hashtag});
    cur = {};
    cur_hashtag = false;
  };
  size_t i = 0, n = cps.size();
  while (i < n) {
    char32_t c = cps[i];
    if (c == '#' && cur.empty() && i + 1 < n && is_handle_char(cps[i + 1])) {
      cur_hashtag = true;
      ++i;
    } else if (is_handle_char(c) || (c >= 0x80 && is_token_char(c))) {
      append_utf8(cur, ascii_lower(c));
      ++i;
    } else {
      flush();
      ++i;
    }
  }
  flush();
  return out;
}

inline std::vector<std::string> phrase_words(std::string_view phrase) {
  std::vector<std::string> words;
  for (const MatchToken& t : tokenize_for_match(phrase)) words.push_back(t.body);
  return words;
}

}  // namespace detail

// Case-insensitive whole-phrase matcher over word boundaries. Hashtag
// entries match their token with or without the '#'.
class KeywordMatcher {
 public:
  static KeywordMatcher compile(const std::vector<std::string>& phrases,
                                const std::vector<std::string>& hashtags) {
    KeywordMatcher m;
    std::unordered_set<std::string> seen;
    for (const auto& p : phrases) {
      std::string display = detail::to_lower_copy(p);
      auto words = detail::phrase_words(display);
      if (words.empty()) continue;
      if (!seen.insert(display).second) continue;
      m.entries_.push_back(Entry{display, std::move(words), false});
    }
    for (const auto& h : hashtags) {
      std::string display = detail::to_lower_copy(h);
      if (display.empty()) continue;
      if (display[0] != '#') display = "#" + display;
      auto words = detail::phrase_words(display);
      if (words.empty()) continue;
      if (!seen.insert(display).second) continue;
      m.entries_.push_back(Entry{display, std::move(words), true});
    }
    if (m.entries_.empty()) throw ValidationError("keyword matcher needs at least one entry");
    return m;
  }

  struct Result {
    bool matched = false;
    std::vector<std::string> terms;  // deduplicated, in entry order
  };

  Result match(std::string_view text) const {
    std::vector<MatchToken> tokens = detail::tokenize_for_match(text);
    Result r;
    for (const Entry& e : entries_) {
      if (contains_sequence(tokens, e.words)) {
        r.matched = true;
        r.terms.push_back(e.display);
      }
    }
    return r;
  }

  bool matches(std::string_view text) const { return match(text).matched; }

  // True when term (body form, '#' ignored) duplicates an existing entry.
  bool has_entry(std::string_view term) const {
    std::string body = detail::to_lower_copy(term);
    if (!body.empty() && body[0] == '#') body.erase(0, 1);
    for (const Entry& e : entries_) {
      std::string entry_body = e.display;
      if (!entry_body.empty() && entry_body[0] == '#') entry_body.erase(0, 1);
      if (entry_body == body) return true;
    }
    return false;
  }

  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::string display;
    std::vector<std::string> words;
    bool hashtag;
  };

  static bool contains_sequence(const std::vector<MatchToken>& tokens,
                                const std::vector<std::string>& words) {
    if (words.empty() || tokens.size() < words.size()) return false;
    for (size_t i = 0; i + words.size() <= tokens.size(); ++i) {
      bool ok = true;
      for (size_t k = 0; k < words.size(); ++k) {
        if (tokens[i + k].body != words[k]) {
          ok = false;
          break;
        }
      }
      if (ok) return true;
    }
    return false;
  }

  std::vector<Entry> entries_;
};

// Keyword file: one entry per line; a leading '#' marks a hashtag entry
// (not a comment). Blank lines are ignored.
inline KeywordMatcher load_keyword_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open keyword file " + path);
  std::vector<std::string> phrases, hashtags;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    line = line.substr(start);
    if (line[0] == '#') hashtags.push_back(line);
    else phrases.push_back(line);
  }
  return KeywordMatcher::compile(phrases, hashtags);
}

// Retains exactly the posts the matcher reports as matches; the filter is
// recorded as an extra provenance entry.
inline Corpus filter_by_keywords(const Corpus& corpus, const KeywordMatcher& matcher) {
  Corpus out;
  out.provenance = corpus.provenance;
  FileStats filter_stats;
  filter_stats.path = "keyword-filter";
  filter_stats.read = corpus.posts.size();
  for (const Post& p : corpus.posts) {
    if (matcher.matches(p.text)) {
      out.posts.push_back(p);
      ++filter_stats.kept;
    } else {
      ++filter_stats.dropped_filter;
    }
  }
  out.provenance.push_back(std::move(filter_stats));
  return out;
}

struct KeywordSuggestion {
  std::string term;  // '#'-prefixed hashtag
  std::size_t cooccurrence_count = 0;
  double lift = 0.0;
};

// Snowball-expansion support: proposes hashtags that co-occur with matched
// posts, ranked by lift = P(term | matched) / P(term | all). Acceptance into
// the keyword list stays with the caller.
inline std::vector<KeywordSuggestion> suggest_keywords(const Corpus& corpus,
                                                       const KeywordMatcher& matcher,
                                                       std::size_t min_count) {
  if (min_count < 1) throw ValidationError("suggest_keywords: min_count must be >= 1");
  std::map<std::string, std::size_t> df_all, df_matched;
  std::size_t n_all = corpus.posts.size(), n_matched = 0;
  for (const Post& p : corpus.posts) {
    bool matched = matcher.matches(p.text);
    if (matched) ++n_matched;
    std::set<std::string> tags;
    for (const MatchToken& t : detail::tokenize_for_match(p.text))
      if (t.hashtag) tags.insert("#" + t.body);
    for (const auto& tag : tags) {
      ++df_all[tag];
      if (matched) ++df_matched[tag];
    }
  }
  // Zero denominators are lifted to one so an everywhere-present term keeps
  // lift exactly 1.0.
  double denom_matched = n_matched > 0 ? static_cast<double>(n_matched) : 1.0;
  double denom_all = n_all > 0 ? static_cast<double>(n_all) : 1.0;
  std::vector<KeywordSuggestion> out;
  for (const auto& [tag, count] : df_matched) {
    if (count < min_count) continue;
    if (matcher.has_entry(tag)) continue;
    double p_matched = static_cast<double>(count) / denom_matched;
    double p_all = static_cast<double>(df_all.at(tag)) / denom_all;
    out.push_back(KeywordSuggestion{tag, count, p_matched / p_all});
  }
  std::sort(out.begin(), out.end(), [](const KeywordSuggestion& a, const KeywordSuggestion& b) {
    if (a.lift != b.lift) return a.lift > b.lift;
    if (a.cooccurrence_count != b.cooccurrence_count)
      return a.cooccurrence_count > b.cooccurrence_count;
    return a.term < b.term;
  });
  return out;
}

}  // namespace miner
