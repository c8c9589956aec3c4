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

#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "miner/error.hpp"
#include "miner/textprep_data.hpp"
#include "miner/utf8.hpp"

namespace miner {

enum class Pipeline { classification, sentiment, topic };

struct TokenStream {
  std::vector<std::string> tokens;
  Pipeline pipeline = Pipeline::classification;
};

struct Stoplist {
  std::unordered_set<std::string> words;
};

using LemmaTable = std::unordered_map<std::string, std::string>;

struct CodepointRange {
  char32_t lo, hi;
};

inline constexpr CodepointRange kEmojiRanges[] = {
    {0x2600, 0x27BF},    // misc symbols + dingbats
    {0x1F300, 0x1F5FF},  // misc symbols and pictographs
    {0x1F600, 0x1F64F},  // emoticons
    {0x1F680, 0x1F6FF},  // transport and map symbols
    {0x1F900, 0x1F9FF},  // supplemental symbols and pictographs
};

inline bool detect_emoji(char32_t cp) {
  for (const auto& r : kEmojiRanges)
    if (cp >= r.lo && cp <= r.hi) return true;
  return false;
}

namespace detail {

inline bool is_ascii_alnum(char32_t c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_ascii_letter(char32_t c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Word constituents: alphanumerics plus any non-emoji codepoint above ASCII.
inline bool is_token_char(char32_t c) {
  if (c < 0x80) return is_ascii_alnum(c);
  return !detect_emoji(c);
}

inline bool is_handle_char(char32_t c) { return is_ascii_alnum(c) || c == '_'; }

inline bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || c == 0x00A0;
}

inline char32_t ascii_lower(char32_t c) { return (c >= 'A' && c <= 'Z') ? c + 32 : c; }

inline std::string to_lower_copy(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c += 32;
  return out;
}

// Matches "http://", "https://" (any case) or a bare "t.co/" at a word start.
inline bool url_starts_at(const std::vector<char32_t>& cps, size_t i) {
  auto match = [&](const char* pat) {
    size_t len = 0;
    while (pat[len]) ++len;
    if (i + len > cps.size()) return false;
    for (size_t k = 0; k < len; ++k)
      if (ascii_lower(cps[i + k]) != static_cast<char32_t>(pat[k])) return false;
    return true;
  };
  if (match("http://") || match("https://")) return true;
  if (match("t.co/")) {
    bool at_word_start = i == 0 || (!is_token_char(cps[i - 1]) && cps[i - 1] != '.');
    return at_word_start && i + 5 < cps.size() && !is_space(cps[i + 5]);
  }
  return false;
}

inline size_t skip_url(const std::vector<char32_t>& cps, size_t i) {
  while (i < cps.size() && !is_space(cps[i])) ++i;
  return i;
}

inline size_t skip_handle(const std::vector<char32_t>& cps, size_t i) {
  while (i < cps.size() && is_handle_char(cps[i])) ++i;
  return i;
}

}  // namespace detail

// Classification pipeline: placeholders for links/mentions/hashtags/emoji,
// everything else lowercased and split on whitespace/punctuation.
inline TokenStream normalize_for_classification(std::string_view text) {
  using namespace detail;
  std::vector<char32_t> cps = decode_utf8(text);
  TokenStream ts;
  ts.pipeline = Pipeline::classification;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      ts.tokens.push_back(cur);
      cur.clear();
    }
  };
  size_t i = 0, n = cps.size();
  while (i < n) {
    char32_t c = cps[i];
    if (url_starts_at(cps, i)) {
      flush();
      ts.tokens.emplace_back("<url>");
      i = skip_url(cps, i);
    } else if (c == '@' && i + 1 < n && is_handle_char(cps[i + 1])) {
      flush();
      ts.tokens.emplace_back("<user>");
      i = skip_handle(cps, i + 1);
    } else if (c == '#' && i + 1 < n && is_handle_char(cps[i + 1])) {
      flush();
      ts.tokens.emplace_back("<hashtag>");
      i = skip_handle(cps, i + 1);
    } else if (detect_emoji(c)) {
      flush();
      ts.tokens.emplace_back("<emojis>");
      ++i;
    } else if (is_token_char(c)) {
      append_utf8(cur, ascii_lower(c));
      ++i;
    } else {
      flush();
      ++i;
    }
  }
  flush();
  return ts;
}

// Sentiment pipeline: drop links/mentions/emoji, strip '#' from hashtags,
// collapse whitespace. Casing is preserved; the scorer lowercases itself.
inline std::string normalize_for_sentiment(std::string_view text) {
  using namespace detail;
  std::vector<char32_t> cps = decode_utf8(text);
  std::string out;
  bool pending_space = false;
  auto emit = [&](char32_t c) {
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    append_utf8(out, c);
  };
  size_t i = 0, n = cps.size();
  while (i < n) {
    char32_t c = cps[i];
    if (url_starts_at(cps, i)) {
      i = skip_url(cps, i);
      pending_space = true;
    } else if (c == '@' && i + 1 < n && is_handle_char(cps[i + 1])) {
      i = skip_handle(cps, i + 1);
      pending_space = true;
    } else if (c == '#' && i + 1 < n && is_handle_char(cps[i + 1])) {
      ++i;  // keep the body, drop the marker
    } else if (detect_emoji(c)) {
      ++i;
      pending_space = true;
    } else if (is_space(c)) {
      pending_space = true;
      ++i;
    } else {
      emit(c);
      ++i;
    }
  }
  return out;
}

namespace detail {

inline bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline std::string undouble(std::string stem) {
  size_t n = stem.size();
  if (n >= 2 && stem[n - 1] == stem[n - 2]) {
    char c = stem[n - 1];
    if (c != 'l' && c != 's' && c != 'z') stem.pop_back();
  }
  return stem;
}

// Fallback stemming when the lookup table misses. One rule per word; a
// stripped form shorter than 3 characters leaves the word untouched.
inline std::string apply_suffix_rules(const std::string& w) {
  size_t len = w.size();
  if (ends_with(w, "ies") && len - 3 + 1 >= 3) return w.substr(0, len - 3) + "y";
  if (ends_with(w, "es") && len > 2) {
    std::string stem = w.substr(0, len - 2);
    if (stem.size() >= 3 &&
        (ends_with(stem, "ss") || ends_with(stem, "x") || ends_with(stem, "z") ||
         ends_with(stem, "ch") || ends_with(stem, "sh")))
      return stem;
  }
  if (w.back() == 's' && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is")) {
    if (len - 1 >= 3) return w.substr(0, len - 1);
  }
  if (ends_with(w, "ing") && len - 3 >= 3) return undouble(w.substr(0, len - 3));
  if (ends_with(w, "ed") && len - 2 >= 3) return undouble(w.substr(0, len - 2));
  return w;
}

}  // namespace detail

inline std::string lemmatize(const std::string& word, const LemmaTable& table) {
  if (auto it = table.find(word); it != table.end()) return it->second;
  return detail::apply_suffix_rules(word);
}

// Topic pipeline: sentiment cleanup, lowercase, tokenize, lemmatize, then
// drop stopwords and one-character tokens.
inline TokenStream normalize_for_topics(std::string_view text, const Stoplist& stoplist,
                                        const LemmaTable& lemma_table) {
  using namespace detail;
  if (stoplist.words.empty())
    throw ValidationError("topic pipeline requires a non-empty stoplist");
  std::string cleaned = normalize_for_sentiment(text);
  std::vector<char32_t> cps = decode_utf8(cleaned);
  TokenStream ts;
  ts.pipeline = Pipeline::topic;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    std::string raw = std::move(cur);
    cur.clear();
    if (stoplist.words.count(raw)) return;
    std::string lemma = lemmatize(raw, lemma_table);
    if (lemma.size() < 2 || stoplist.words.count(lemma)) return;
    ts.tokens.push_back(std::move(lemma));
  };
  for (char32_t c : cps) {
    if (is_token_char(c)) append_utf8(cur, ascii_lower(c));
    else flush();
  }
  flush();
  return ts;
}

inline const Stoplist& builtin_stoplist() {
  static const Stoplist stoplist = [] {
    Stoplist s;
    for (size_t i = 0; i < data::kStopwordCount; ++i) s.words.insert(data::kStopwords[i]);
    return s;
  }();
  return stoplist;
}

inline const LemmaTable& builtin_lemma_table() {
  static const LemmaTable table = [] {
    LemmaTable t;
    for (size_t i = 0; i < data::kLemmaPairCount; ++i)
      t.emplace(data::kLemmaPairs[i][0], data::kLemmaPairs[i][1]);
    return t;
  }();
  return table;
}

// Stoplist file: one lowercase word per line.
inline Stoplist load_stoplist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open stoplist file " + path);
  Stoplist s;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
    if (line.empty()) continue;
    for (char& c : line)
      if (c >= 'A' && c <= 'Z') c += 32;
    s.words.insert(line);
  }
  if (s.words.empty()) throw ValidationError("stoplist file " + path + " has no entries");
  return s;
}

// Lemma table file: "inflected<TAB>lemma" per line.
inline LemmaTable load_lemma_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open lemma table file " + path);
  LemmaTable t;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": expected \"inflected<TAB>lemma\"");
    std::string k = line.substr(0, tab);
    std::string v = line.substr(tab + 1);
    for (char& c : k)
      if (c >= 'A' && c <= 'Z') c += 32;
    for (char& c : v)
      if (c >= 'A' && c <= 'Z') c += 32;
    t[k] = v;
  }
  return t;
}

}  // namespace miner
