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
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "miner/error.hpp"
#include "miner/textprep_data.hpp"
#include "miner/timeparse.hpp"

namespace miner {

enum class Source { search_archive, random_sample };
enum class GroupLabel { irrelevant, promotional, laypeople };

inline const char* to_string(Source s) {
  return s == Source::search_archive ? "search_archive" : "random_sample";
}

inline std::optional<Source> parse_source(std::string_view s) {
  if (s == "search_archive") return Source::search_archive;
  if (s == "random_sample") return Source::random_sample;
  return std::nullopt;
}

inline const char* to_string(GroupLabel g) {
  switch (g) {
    case GroupLabel::irrelevant: return "irrelevant";
    case GroupLabel::promotional: return "promotional";
    default: return "laypeople";
  }
}

inline std::optional<GroupLabel> parse_group_label(std::string_view s) {
  if (s == "irrelevant") return GroupLabel::irrelevant;
  if (s == "promotional") return GroupLabel::promotional;
  if (s == "laypeople") return GroupLabel::laypeople;
  return std::nullopt;
}

struct Post {
  std::string id;
  std::int64_t created_at = 0;  // UTC epoch seconds
  std::string text;
  std::optional<std::string> author_location;
  std::optional<std::string> lang;
  Source source = Source::search_archive;

  bool operator==(const Post&) const = default;
};

struct FileStats {
  std::string path;
  std::size_t read = 0;
  std::size_t kept = 0;
  std::size_t dropped_duplicate = 0;
  std::size_t dropped_language = 0;
  std::size_t dropped_filter = 0;
  std::size_t malformed = 0;  // lenient mode only; not part of `read`
};

struct Corpus {
  std::vector<Post> posts;
  std::vector<FileStats> provenance;
};

enum class ParseMode { strict, lenient };

// Duplicate key policy. The id is always a key (loaded corpora never carry
// two posts with one id); id_and_text additionally drops posts whose
// normalized text and timestamp coincide with an already-kept post
// (re-serving artifacts across sources).
enum class DedupPolicy { id_and_text, id_only };

inline std::optional<DedupPolicy> parse_dedup_policy(std::string_view s) {
  if (s == "id_and_text") return DedupPolicy::id_and_text;
  if (s == "id_only") return DedupPolicy::id_only;
  return std::nullopt;
}

struct LoadOptions {
  ParseMode mode = ParseMode::strict;
  DedupPolicy dedup = DedupPolicy::id_and_text;
  std::optional<std::string> lang_filter;  // primary-subtag match, e.g. "en"
};

namespace detail {

inline std::string primary_subtag(std::string_view tag) {
  std::string out;
  for (char c : tag) {
    if (c == '-' || c == '_') break;
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
  }
  return out;
}

// >= 2 hits among the 50 most common English words marks a text as English.
inline bool looks_english(std::string_view text) {
  static const std::unordered_set<std::string> top50 = [] {
    std::unordered_set<std::string> s;
    for (size_t i = 0; i < data::kEnglishTop50Count; ++i) s.insert(data::kEnglishTop50[i]);
    return s;
  }();
  int hits = 0;
  std::string cur;
  auto check = [&] {
    if (!cur.empty() && top50.count(cur)) ++hits;
    cur.clear();
  };
  for (char c : text) {
    if (c >= 'A' && c <= 'Z') cur.push_back(static_cast<char>(c + 32));
    else if (c >= 'a' && c <= 'z') cur.push_back(c);
    else check();
    if (hits >= 2) return true;
  }
  check();
  return hits >= 2;
}

inline std::string normalized_text_key(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending = false;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending = true;
      continue;
    }
    if (pending && !out.empty()) out.push_back(' ');
    pending = false;
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
  }
  return out;
}

inline bool text_is_blank(std::string_view text) {
  for (char c : text)
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') return false;
  return true;
}

inline Post parse_record(const std::string& line, const std::string& where) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(where + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw ValidationError(where + ": record is not a JSON object");
  Post p;
  if (!j.contains("id") || !j["id"].is_string() || j["id"].get<std::string>().empty())
    throw ValidationError(where + ": missing or empty \"id\"");
  p.id = j["id"].get<std::string>();
  if (!j.contains("created_at")) throw ValidationError(where + ": missing \"created_at\"");
  if (j["created_at"].is_number_integer()) {
    p.created_at = j["created_at"].get<std::int64_t>();
  } else if (j["created_at"].is_string()) {
    p.created_at = parse_timestamp(j["created_at"].get<std::string>());
  } else {
    throw ValidationError(where + ": \"created_at\" must be a string or integer");
  }
  if (!j.contains("text") || !j["text"].is_string())
    throw ValidationError(where + ": missing \"text\"");
  p.text = j["text"].get<std::string>();
  if (text_is_blank(p.text)) throw ValidationError(where + ": \"text\" is blank");
  if (j.contains("user_location") && j["user_location"].is_string())
    p.author_location = j["user_location"].get<std::string>();
  if (j.contains("lang") && j["lang"].is_string()) p.lang = j["lang"].get<std::string>();
  if (j.contains("source")) {
    if (!j["source"].is_string())
      throw ValidationError(where + ": \"source\" must be a string");
    auto src = parse_source(j["source"].get<std::string>());
    if (!src) throw ValidationError(where + ": unknown \"source\" value");
    p.source = *src;
  }
  return p;
}

}  // namespace detail

// Loads line-delimited JSON records, filters by language, removes duplicates
// (by id, and by identical normalized text at the same timestamp; the first
// occurrence in (created_at, id) order wins), and fills provenance counts.
inline Corpus load_corpus(const std::vector<std::string>& paths, const LoadOptions& opts = {}) {
  if (paths.empty()) throw ValidationError("load_corpus: no input paths");
  Corpus corpus;
  struct Pending {
    Post post;
    std::size_t file_idx;
    std::size_t order;
  };
  std::vector<Pending> pending;

  std::optional<std::string> filter;
  if (opts.lang_filter) filter = detail::primary_subtag(*opts.lang_filter);

  std::size_t order = 0;
  for (std::size_t fi = 0; fi < paths.size(); ++fi) {
    const std::string& path = paths[fi];
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file " + path);
    FileStats stats;
    stats.path = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      Post p;
      try {
        p = detail::parse_record(line, path + ":" + std::to_string(lineno));
      } catch (const ValidationError&) {
        if (opts.mode == ParseMode::strict) throw;
        ++stats.malformed;
        continue;
      }
      ++stats.read;
      if (filter) {
        bool keep;
        if (p.lang) keep = detail::primary_subtag(*p.lang) == *filter;
        else keep = *filter == "en" && detail::looks_english(p.text);
        if (!keep) {
          ++stats.dropped_language;
          continue;
        }
      }
      pending.push_back(Pending{std::move(p), fi, order++});
    }
    corpus.provenance.push_back(std::move(stats));
  }

  std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    return std::tie(a.post.created_at, a.post.id) < std::tie(b.post.created_at, b.post.id);
  });

  std::unordered_set<std::string> seen_ids;
  std::unordered_set<std::string> seen_text_keys;
  for (auto& rec : pending) {
    bool duplicate = !seen_ids.insert(rec.post.id).second;
    if (opts.dedup == DedupPolicy::id_and_text) {
      std::string text_key = detail::normalized_text_key(rec.post.text) + '\x1f' +
                             std::to_string(rec.post.created_at);
      duplicate = !seen_text_keys.insert(text_key).second || duplicate;
    }
    if (duplicate) {
      ++corpus.provenance[rec.file_idx].dropped_duplicate;
      continue;
    }
    ++corpus.provenance[rec.file_idx].kept;
    corpus.posts.push_back(std::move(rec.post));
  }
  return corpus;
}

inline nlohmann::json provenance_to_json(const Corpus& corpus) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : corpus.provenance) {
    files.push_back({{"path", f.path},
                     {"read", f.read},
                     {"kept", f.kept},
                     {"dropped_duplicate", f.dropped_duplicate},
                     {"dropped_language", f.dropped_language},
                     {"dropped_filter", f.dropped_filter},
                     {"malformed", f.malformed}});
  }
  return nlohmann::json{{"files", files}};
}

// Writes the corpus in the input format plus a provenance sidecar.
inline void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  for (const Post& p : corpus.posts) {
    nlohmann::json j{{"id", p.id}, {"created_at", format_utc(p.created_at)}, {"text", p.text}};
    if (p.author_location) j["user_location"] = *p.author_location;
    if (p.lang) j["lang"] = *p.lang;
    j["source"] = to_string(p.source);
    out << j.dump() << '\n';
  }
  std::ofstream side(path + ".provenance.json");
  if (!side) throw std::runtime_error("cannot open output file " + path + ".provenance.json");
  side << provenance_to_json(corpus).dump(2) << '\n';
}

// Splits into (irrelevant, promotional, laypeople), preserving order.
inline std::tuple<Corpus, Corpus, Corpus> partition_by_label(
    const Corpus& corpus, const std::map<std::string, GroupLabel>& labels) {
  std::vector<std::string> missing;
  for (const Post& p : corpus.posts) {
    if (!labels.count(p.id)) {
      missing.push_back(p.id);
      if (missing.size() >= 10) break;
    }
  }
  if (!missing.empty()) {
    std::string msg = "partition_by_label: missing label for ids:";
    for (const auto& id : missing) msg += " " + id;
    throw ValidationError(msg);
  }
  std::tuple<Corpus, Corpus, Corpus> out;
  for (const Post& p : corpus.posts) {
    switch (labels.at(p.id)) {
      case GroupLabel::irrelevant: std::get<0>(out).posts.push_back(p); break;
      case GroupLabel::promotional: std::get<1>(out).posts.push_back(p); break;
      case GroupLabel::laypeople: std::get<2>(out).posts.push_back(p); break;
    }
  }
  return out;
}

}  // namespace miner
