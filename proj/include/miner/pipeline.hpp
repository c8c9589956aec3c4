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
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "miner/btm.hpp"
#include "miner/classify.hpp"
#include "miner/config.hpp"
#include "miner/corpus.hpp"
#include "miner/csv.hpp"
#include "miner/geo.hpp"
#include "miner/manifest.hpp"
#include "miner/matchkw.hpp"
#include "miner/sentiment.hpp"
#include "miner/stats.hpp"
#include "miner/textprep.hpp"

namespace miner::pipeline {

inline std::string out_path(const RunConfig& cfg, const std::string& name) {
  return cfg.out_dir() + "/" + name;
}

inline void ensure_out_dir(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir());
}

inline Corpus load_pipeline_corpus(const RunConfig& cfg) {
  std::string path = out_path(cfg, "corpus.jsonl");
  require_file(path, "run the ingest stage first");
  return load_corpus({path});
}

inline Stoplist stoplist_for(const RunConfig& cfg) {
  if (auto path = cfg.find("textprep", "stoplist")) return load_stoplist(*path);
  return builtin_stoplist();
}

inline LemmaTable lemma_table_for(const RunConfig& cfg) {
  if (auto path = cfg.find("textprep", "lemma_table")) return load_lemma_table(*path);
  return builtin_lemma_table();
}

inline std::size_t btm_window(const RunConfig& cfg, const std::string& section) {
  long long w = cfg.get_int(section, "window", 0);
  if (w == 0) return kWholeDocumentWindow;  // whole document
  if (w < 2) throw ValidationError("config [" + section + "] window must be 0 or >= 2");
  return static_cast<std::size_t>(w);
}

inline void write_labels_file(const std::string& path,
                              const std::map<std::string, GroupLabel>& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  for (const auto& [id, label] : labels) out << id << '\t' << to_string(label) << '\n';
}

inline std::map<std::string, GroupLabel> read_labels_file(const RunConfig& cfg) {
  std::string path = out_path(cfg, "labels.tsv");
  require_file(path, "run the classify stage first");
  return load_annotations(path);
}

struct ScoreFile {
  std::vector<std::string> categories;
  std::vector<std::pair<std::string, EmotionScores>> rows;  // post id -> scores
};

inline void write_scores_file(const std::string& path, const std::vector<std::string>& categories,
                              const std::vector<std::pair<std::string, EmotionScores>>& rows) {
  std::vector<std::string> header{"id", "token_count"};
  header.insert(header.end(), categories.begin(), categories.end());
  CsvWriter csv(path, header);
  for (const auto& [id, scores] : rows) {
    std::vector<std::string> fields{id, std::to_string(scores.token_count)};
    for (double p : scores.pct) fields.push_back(fmt_double(p));
    csv.row(fields);
  }
}

inline ScoreFile read_scores_file(const RunConfig& cfg) {
  std::string path = out_path(cfg, "sentiment_scores.csv");
  require_file(path, "run the sentiment stage first");
  CsvTable table = read_csv(path);
  if (table.header.size() < 3 || table.header[0] != "id" || table.header[1] != "token_count")
    throw ValidationError(path + ": unexpected header");
  ScoreFile out;
  out.categories.assign(table.header.begin() + 2, table.header.end());
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw ValidationError(path + ": ragged row");
    EmotionScores s;
    s.token_count = static_cast<std::size_t>(std::stoull(row[1]));
    for (size_t i = 2; i < row.size(); ++i) s.pct.push_back(std::stod(row[i]));
    out.rows.emplace_back(row[0], std::move(s));
  }
  return out;
}

inline void write_geo_file(const std::string& path,
                           const std::vector<StateAssignment>& assignments) {
  CsvWriter csv(path, {"id", "state", "matched_on"});
  for (const auto& a : assignments)
    csv.row({a.post_id, a.state ? *a.state : "", a.matched_on});
}

inline std::vector<StateAssignment> read_geo_file(const RunConfig& cfg) {
  std::string path = out_path(cfg, "geo_states.csv");
  require_file(path, "run the geocode stage first");
  CsvTable table = read_csv(path);
  std::vector<StateAssignment> out;
  for (const auto& row : table.rows) {
    if (row.size() != 3) throw ValidationError(path + ": ragged row");
    StateAssignment a;
    a.post_id = row[0];
    if (!row[1].empty()) a.state = row[1];
    a.matched_on = row[2];
    out.push_back(std::move(a));
  }
  return out;
}

struct AssignmentRow {
  std::string id;
  std::uint32_t topic = 0;
  double probability = 0.0;
  bool no_biterms = false;
};

inline void write_assignments_file(const std::string& path,
                                   const std::vector<AssignmentRow>& rows) {
  CsvWriter csv(path, {"id", "topic", "probability", "no_biterms"});
  for (const auto& r : rows)
    csv.row({r.id, std::to_string(r.topic), fmt_double(r.probability),
             r.no_biterms ? "1" : "0"});
}

inline std::vector<AssignmentRow> read_assignments_file(const RunConfig& cfg) {
  std::string path = out_path(cfg, "topic_assignments.csv");
  require_file(path, "run the topics-infer stage first");
  CsvTable table = read_csv(path);
  std::vector<AssignmentRow> out;
  for (const auto& row : table.rows) {
    if (row.size() != 4) throw ValidationError(path + ": ragged row");
    out.push_back(AssignmentRow{row[0], static_cast<std::uint32_t>(std::stoul(row[1])),
                                std::stod(row[2]), row[3] == "1"});
  }
  return out;
}

// ---------------------------------------------------------------- stages

inline StageCounts cmd_ingest(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  std::vector<std::string> paths = cfg.get_list("inputs", "posts");
  if (paths.empty()) throw ValidationError("config is missing [inputs] posts");
  for (const auto& p : paths) require_file(p, "input corpus file");
  LoadOptions opts;
  std::string mode = cfg.get("inputs", "parse", "strict");
  if (mode == "lenient") opts.mode = ParseMode::lenient;
  else if (mode != "strict")
    throw ValidationError("config [inputs] parse must be strict or lenient");
  if (auto dedup = cfg.find("inputs", "dedup")) {
    auto policy = parse_dedup_policy(*dedup);
    if (!policy)
      throw ValidationError("config [inputs] dedup must be id_and_text or id_only");
    opts.dedup = *policy;
  }
  if (auto lang = cfg.find("inputs", "lang_filter")) opts.lang_filter = *lang;

  Corpus corpus = load_corpus(paths, opts);
  std::int64_t read = 0, dup = 0, lang = 0, malformed = 0;
  for (const auto& f : corpus.provenance) {
    read += static_cast<std::int64_t>(f.read);
    dup += static_cast<std::int64_t>(f.dropped_duplicate);
    lang += static_cast<std::int64_t>(f.dropped_language);
    malformed += static_cast<std::int64_t>(f.malformed);
  }
  std::int64_t filtered = 0;
  if (cfg.get_bool("inputs", "keyword_filter", false)) {
    KeywordMatcher matcher = load_keyword_file(cfg.require("keywords", "topic_list"));
    corpus = filter_by_keywords(corpus, matcher);
    filtered = static_cast<std::int64_t>(corpus.provenance.back().dropped_filter);
  }
  save_corpus(corpus, out_path(cfg, "corpus.jsonl"));

  StageCounts counts;
  counts["posts_kept"] = static_cast<std::int64_t>(corpus.posts.size());
  counts["records_read"] = read;
  counts["dropped_duplicate"] = dup;
  counts["dropped_language"] = lang;
  counts["dropped_filter"] = filtered;
  counts["malformed"] = malformed;
  return counts;
}

inline StageCounts cmd_suggest(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  Corpus corpus = load_pipeline_corpus(cfg);
  KeywordMatcher matcher = load_keyword_file(cfg.require("keywords", "topic_list"));
  std::size_t min_count =
      static_cast<std::size_t>(cfg.get_int("keywords", "suggest_min_count", 2));
  auto suggestions = suggest_keywords(corpus, matcher, min_count);
  CsvWriter csv(out_path(cfg, "keyword_suggestions.csv"), {"term", "count", "lift"});
  for (const auto& s : suggestions)
    csv.row({s.term, std::to_string(s.cooccurrence_count), fmt_double(s.lift)});
  return {{"posts", static_cast<std::int64_t>(corpus.posts.size())},
          {"suggestions", static_cast<std::int64_t>(suggestions.size())}};
}

struct ClassifierSetup {
  FeatureConfig features;
  std::optional<EmbeddingTable> embeddings;
  std::string stage1_path;
  std::string stage2_path;
};

inline ClassifierSetup classifier_setup(const RunConfig& cfg) {
  ClassifierSetup setup;
  long long dims = cfg.get_int("classifier", "dims", 1 << 18);
  if (dims < 2 || (dims & (dims - 1)) != 0)
    throw ValidationError("config [classifier] dims must be a power of two >= 2");
  setup.features.dims = static_cast<std::uint32_t>(dims);
  setup.features.bigrams = cfg.get_bool("classifier", "bigrams", true);
  if (auto path = cfg.find("classifier", "embeddings"))
    setup.embeddings = load_embeddings(*path);
  setup.stage1_path = cfg.get("classifier", "stage1_model", out_path(cfg, "stage1.model"));
  setup.stage2_path = cfg.get("classifier", "stage2_model", out_path(cfg, "stage2.model"));
  return setup;
}

inline StageCounts cmd_classify_train(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  Corpus corpus = load_pipeline_corpus(cfg);
  ClassifierSetup setup = classifier_setup(cfg);
  auto annotations = load_annotations(cfg.require("classifier", "annotations"));

  TrainConfig train_cfg;
  train_cfg.features = setup.features;
  train_cfg.embed_dim = setup.embeddings ? static_cast<std::uint32_t>(setup.embeddings->dim) : 0;
  train_cfg.epochs = static_cast<std::size_t>(cfg.get_int("classifier", "epochs", 50));
  train_cfg.learning_rate = cfg.get_double("classifier", "learning_rate", 0.1);
  train_cfg.l2 = cfg.get_double("classifier", "l2", 1e-4);
  train_cfg.batch_size = static_cast<std::size_t>(cfg.get_int("classifier", "batch", 32));
  train_cfg.seed = cfg.seed_override()
                       ? *cfg.seed_override()
                       : static_cast<std::uint64_t>(cfg.get_int("classifier", "seed", 7));

  const EmbeddingTable* emb = setup.embeddings ? &*setup.embeddings : nullptr;
  std::vector<Example> stage1, stage2;
  for (const Post& p : corpus.posts) {
    auto it = annotations.find(p.id);
    if (it == annotations.end()) continue;
    FeatureVector fv = featurize(normalize_for_classification(p.text), setup.features, emb);
    stage1.push_back(Example{fv, it->second != GroupLabel::irrelevant});
    if (it->second != GroupLabel::irrelevant)
      stage2.push_back(Example{std::move(fv), it->second == GroupLabel::promotional});
  }
  if (stage1.empty())
    throw ValidationError("classify-train: no annotated posts found in the corpus");

  CsvWriter eval_csv(out_path(cfg, "classifier_eval.csv"),
                     {"stage", "n_train", "n_test", "precision", "recall", "f_score", "tp", "fp",
                      "fn", "tn", "seed"});
  StageCounts counts;
  counts["annotated"] = static_cast<std::int64_t>(stage1.size());

  auto run_stage = [&](const std::vector<Example>& all, Stage stage, const std::string& path,
                       const std::string& name) {
    auto [train_idx, test_idx] = split_train_test(all.size(), train_cfg.seed);
    std::vector<Example> train_set, test_set;
    for (auto i : train_idx) train_set.push_back(all[i]);
    for (auto i : test_idx) test_set.push_back(all[i]);
    LinearModel model = train(train_set, stage, train_cfg);
    EvalReport report = evaluate(model, test_set);
    report.split_seed = train_cfg.seed;
    save_model(model, path);
    eval_csv.row({name, std::to_string(train_set.size()), std::to_string(test_set.size()),
                  fmt_double(report.precision), fmt_double(report.recall),
                  fmt_double(report.f_score), std::to_string(report.tp),
                  std::to_string(report.fp), std::to_string(report.fn),
                  std::to_string(report.tn), std::to_string(report.split_seed)});
    counts[name + "_train"] = static_cast<std::int64_t>(train_set.size());
    counts[name + "_test"] = static_cast<std::int64_t>(test_set.size());
  };
  run_stage(stage1, Stage::relevance, setup.stage1_path, "relevance");
  run_stage(stage2, Stage::audience, setup.stage2_path, "audience");
  return counts;
}

inline StageCounts cmd_classify(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  Corpus corpus = load_pipeline_corpus(cfg);
  ClassifierSetup setup = classifier_setup(cfg);
  require_file(setup.stage1_path, "run the classify-train stage first");
  require_file(setup.stage2_path, "run the classify-train stage first");
  LinearModel stage1 = load_model(setup.stage1_path);
  LinearModel stage2 = load_model(setup.stage2_path);
  const EmbeddingTable* emb = setup.embeddings ? &*setup.embeddings : nullptr;
  auto labels = classify_two_stage(corpus, stage1, stage2, setup.features, emb);
  write_labels_file(out_path(cfg, "labels.tsv"), labels);

  StageCounts counts;
  counts["posts"] = static_cast<std::int64_t>(corpus.posts.size());
  std::int64_t irrelevant = 0, promotional = 0, laypeople = 0;
  for (const auto& [id, label] : labels) {
    if (label == GroupLabel::irrelevant) ++irrelevant;
    else if (label == GroupLabel::promotional) ++promotional;
    else ++laypeople;
  }
  counts["irrelevant"] = irrelevant;
  counts["promotional"] = promotional;
  counts["laypeople"] = laypeople;
  return counts;
}

inline StageCounts cmd_sentiment(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  Corpus corpus = load_pipeline_corpus(cfg);
  auto labels = read_labels_file(cfg);
  LexiconSet lex = load_lexicon(cfg.require("lexicon", "path"));
  std::string group = cfg.get("sentiment", "group", "laypeople");
  std::optional<GroupLabel> wanted;
  if (group != "all") {
    wanted = parse_group_label(group);
    if (!wanted)
      throw ValidationError("config [sentiment] group must be a label name or \"all\"");
  }
  std::vector<std::pair<std::string, EmotionScores>> rows;
  for (const Post& p : corpus.posts) {
    auto it = labels.find(p.id);
    if (it == labels.end())
      throw ValidationError("sentiment: post " + p.id + " has no label; rerun classify");
    if (wanted && it->second != *wanted) continue;
    rows.emplace_back(p.id, score(normalize_for_sentiment(p.text), lex));
  }
  write_scores_file(out_path(cfg, "sentiment_scores.csv"), lex.category_names(), rows);
  return {{"posts_scored", static_cast<std::int64_t>(rows.size())}};
}

inline StageCounts cmd_geocode(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  Corpus corpus = load_pipeline_corpus(cfg);
  Gazetteer gaz;
  if (auto path = cfg.find("geo", "gazetteer")) gaz = load_gazetteer(*path);
  else gaz = builtin_gazetteer();
  auto assignments = geocode_posts(corpus, gaz);
  write_geo_file(out_path(cfg, "geo_states.csv"), assignments);
  std::int64_t assigned = 0;
  for (const auto& a : assignments)
    if (a.state) ++assigned;
  return {{"posts", static_cast<std::int64_t>(assignments.size())},
          {"assigned", assigned},
          {"unassigned", static_cast<std::int64_t>(assignments.size()) - assigned}};
}

namespace detail {

struct MonthlyEmotions {
  std::vector<std::string> categories;
  std::vector<GroupScoreRow> rows;  // group = YYYY-MM, sorted
};

inline MonthlyEmotions monthly_emotion_table(const Corpus& corpus, const ScoreFile& scores) {
  std::map<std::string, const Post*> posts_by_id;
  for (const Post& p : corpus.posts) posts_by_id.emplace(p.id, &p);
  std::vector<std::pair<const Post*, EmotionScores>> items;
  for (const auto& [id, sc] : scores.rows) {
    auto it = posts_by_id.find(id);
    if (it == posts_by_id.end())
      throw ValidationError("trend: scored post " + id + " is not in the corpus");
    items.emplace_back(it->second, sc);
  }
  MonthlyEmotions out;
  out.categories = scores.categories;
  out.rows = aggregate_scores(items, ScoreGroupBy::month);
  return out;
}

inline void write_group_score_csv(const std::string& path,
                                  const std::vector<std::string>& categories,
                                  const std::vector<GroupScoreRow>& rows,
                                  const std::string& group_column = "group") {
  std::vector<std::string> header{group_column, "n"};
  header.insert(header.end(), categories.begin(), categories.end());
  CsvWriter csv(path, header);
  for (const auto& row : rows) {
    std::vector<std::string> fields{row.group, std::to_string(row.n)};
    for (double m : row.mean) fields.push_back(fmt_double(m));
    csv.row(fields);
  }
}

inline std::vector<std::string> trend_csv_header() {
  return {"series_name", "n", "S", "var_S", "Z", "p_value", "verdict"};
}

inline std::vector<std::string> trend_csv_row(const std::string& name, std::size_t n,
                                              const TrendResult& r) {
  return {name,           std::to_string(n),      std::to_string(r.s), fmt_double(r.var_s),
          fmt_double(r.z), fmt_double(r.p_value), to_string(r.verdict)};
}

}  // namespace detail

inline StageCounts cmd_trend(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  Corpus corpus = load_pipeline_corpus(cfg);
  ScoreFile scores = read_scores_file(cfg);
  auto table = detail::monthly_emotion_table(corpus, scores);
  detail::write_group_score_csv(out_path(cfg, "report_emotion_monthly.csv"), table.categories,
                                table.rows);
  CsvWriter csv(out_path(cfg, "report_trend_tests.csv"), detail::trend_csv_header());
  for (size_t ci = 0; ci < table.categories.size(); ++ci) {
    std::vector<double> series;
    for (const auto& row : table.rows) series.push_back(row.mean[ci]);
    TrendResult r = mann_kendall(series);
    csv.row(detail::trend_csv_row(table.categories[ci], series.size(), r));
  }
  return {{"months", static_cast<std::int64_t>(table.rows.size())},
          {"series", static_cast<std::int64_t>(table.categories.size())}};
}

namespace detail {

struct TopicTokens {
  std::vector<std::string> ids;                     // post ids, relevant only
  std::vector<std::vector<std::string>> tokens;     // topic-pipeline tokens
  std::vector<GroupLabel> groups;
};

inline TopicTokens relevant_topic_tokens(const RunConfig& cfg, const Corpus& corpus,
                                         const std::map<std::string, GroupLabel>& labels) {
  Stoplist stoplist = stoplist_for(cfg);
  LemmaTable lemmas = lemma_table_for(cfg);
  TopicTokens out;
  for (const Post& p : corpus.posts) {
    auto it = labels.find(p.id);
    if (it == labels.end())
      throw ValidationError("topics: post " + p.id + " has no label; rerun classify");
    if (it->second == GroupLabel::irrelevant) continue;
    out.ids.push_back(p.id);
    out.tokens.push_back(normalize_for_topics(p.text, stoplist, lemmas).tokens);
    out.groups.push_back(it->second);
  }
  return out;
}

inline void write_top_words_csv(const std::string& path, const BtmModel& model,
                                std::size_t top_k) {
  CsvWriter csv(path, {"topic", "rank", "word", "weight"});
  std::size_t k = std::min(top_k, model.vocab.size());
  for (std::uint32_t z = 0; z < model.k; ++z) {
    auto words = top_words(model, z, k);
    for (size_t rank = 0; rank < words.size(); ++rank)
      csv.row({std::to_string(z), std::to_string(rank + 1), words[rank].first,
               fmt_double(words[rank].second)});
  }
}

struct FitInputs {
  Vocab vocab;
  std::vector<Biterm> biterms;
};

inline FitInputs build_biterms(const TopicTokens& tokens, std::size_t window) {
  FitInputs in;
  for (const auto& doc : tokens.tokens) {
    std::vector<std::uint32_t> ids;
    ids.reserve(doc.size());
    for (const auto& t : doc) ids.push_back(in.vocab.add(t));
    std::size_t w = window == kWholeDocumentWindow ? std::max<std::size_t>(2, ids.size()) : window;
    auto doc_biterms = extract_biterms(ids, w);
    in.biterms.insert(in.biterms.end(), doc_biterms.begin(), doc_biterms.end());
  }
  return in;
}

}  // namespace detail

inline StageCounts cmd_topics_fit(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  Corpus corpus = load_pipeline_corpus(cfg);
  auto labels = read_labels_file(cfg);
  auto tokens = detail::relevant_topic_tokens(cfg, corpus, labels);
  if (tokens.ids.empty()) throw ValidationError("topics-fit: no relevant posts to model");

  std::uint32_t k = static_cast<std::uint32_t>(cfg.get_int("btm", "k", 100));
  double alpha = cfg.get_double("btm", "alpha", default_btm_alpha(k));
  double beta = cfg.get_double("btm", "beta", kDefaultBtmBeta);
  std::size_t iterations = static_cast<std::size_t>(cfg.get_int("btm", "iterations", 500));
  std::uint64_t seed = cfg.seed_override() ? *cfg.seed_override()
                                           : static_cast<std::uint64_t>(cfg.get_int("btm", "seed", 42));
  auto inputs = detail::build_biterms(tokens, btm_window(cfg, "btm"));
  BtmModel model =
      fit_btm(inputs.biterms, std::move(inputs.vocab), k, alpha, beta, iterations, seed);
  save_btm(model, out_path(cfg, "btm.model"));
  detail::write_top_words_csv(out_path(cfg, "report_topic_top_words.csv"), model,
                              static_cast<std::size_t>(cfg.get_int("btm", "top_words", 20)));
  return {{"relevant_posts", static_cast<std::int64_t>(tokens.ids.size())},
          {"vocabulary", static_cast<std::int64_t>(model.vocab.size())},
          {"biterms", static_cast<std::int64_t>(inputs.biterms.size())},
          {"k", static_cast<std::int64_t>(k)},
          {"iterations", static_cast<std::int64_t>(iterations)}};
}

inline StageCounts cmd_topics_infer(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  Corpus corpus = load_pipeline_corpus(cfg);
  auto labels = read_labels_file(cfg);
  std::string model_path = out_path(cfg, "btm.model");
  require_file(model_path, "run the topics-fit stage first");
  BtmModel model = load_btm(model_path);
  Stoplist stoplist = stoplist_for(cfg);
  LemmaTable lemmas = lemma_table_for(cfg);
  std::size_t window = btm_window(cfg, "btm");

  std::vector<AssignmentRow> rows;
  std::int64_t no_biterms = 0;
  for (const Post& p : corpus.posts) {
    auto it = labels.find(p.id);
    if (it == labels.end() || it->second == GroupLabel::irrelevant) continue;
    TokenStream ts = normalize_for_topics(p.text, stoplist, lemmas);
    TopicAssignment a = infer_topics(model, ts, window);
    if (a.no_biterms) ++no_biterms;
    rows.push_back(AssignmentRow{p.id, a.argmax_topic, a.distribution[a.argmax_topic],
                                 a.no_biterms});
  }
  write_assignments_file(out_path(cfg, "topic_assignments.csv"), rows);
  return {{"posts", static_cast<std::int64_t>(rows.size())}, {"no_biterms", no_biterms}};
}

namespace detail {

// Zero-filled monthly volume per (theme, group) over the full month range.
struct ThemeVolumes {
  std::vector<std::string> months;  // YYYY-MM, ascending
  std::map<std::string, std::vector<double>> promotional;
  std::map<std::string, std::vector<double>> laypeople;
};

inline ThemeVolumes theme_monthly_volumes(const Corpus& corpus,
                                          const std::map<std::string, GroupLabel>& labels,
                                          const std::vector<AssignmentRow>& assignments,
                                          const TopicMergeMap& merge) {
  std::map<std::string, const Post*> posts_by_id;
  for (const Post& p : corpus.posts) posts_by_id.emplace(p.id, &p);

  std::set<YearMonth> month_set;
  struct Obs {
    YearMonth month;
    std::string theme;
    GroupLabel group;
  };
  std::vector<Obs> observations;
  for (const auto& a : assignments) {
    auto pit = posts_by_id.find(a.id);
    if (pit == posts_by_id.end())
      throw ValidationError("correlate: assigned post " + a.id + " is not in the corpus");
    auto lit = labels.find(a.id);
    if (lit == labels.end())
      throw ValidationError("correlate: post " + a.id + " has no label; rerun classify");
    if (a.topic >= merge.size())
      throw ValidationError("correlate: topic " + std::to_string(a.topic) +
                            " not covered by the merge map");
    YearMonth ym = year_month_of(pit->second->created_at);
    month_set.insert(ym);
    observations.push_back(Obs{ym, merge[a.topic], lit->second});
  }
  ThemeVolumes out;
  if (month_set.empty()) return out;
  YearMonth ym = *month_set.begin();
  YearMonth last = *month_set.rbegin();
  std::map<YearMonth, std::size_t> month_index;
  while (ym <= last) {
    month_index.emplace(ym, out.months.size());
    out.months.push_back(to_string(ym));
    if (++ym.month > 12) {
      ym.month = 1;
      ++ym.year;
    }
  }
  std::set<std::string> themes(merge.begin(), merge.end());
  for (const auto& theme : themes) {
    out.promotional[theme].assign(out.months.size(), 0.0);
    out.laypeople[theme].assign(out.months.size(), 0.0);
  }
  for (const auto& obs : observations) {
    std::size_t mi = month_index.at(obs.month);
    if (obs.group == GroupLabel::promotional) out.promotional[obs.theme][mi] += 1.0;
    else if (obs.group == GroupLabel::laypeople) out.laypeople[obs.theme][mi] += 1.0;
  }
  return out;
}

}  // namespace detail

inline StageCounts cmd_correlate(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  Corpus corpus = load_pipeline_corpus(cfg);
  auto labels = read_labels_file(cfg);
  auto assignments = read_assignments_file(cfg);
  std::string model_path = out_path(cfg, "btm.model");
  require_file(model_path, "run the topics-fit stage first");
  BtmModel model = load_btm(model_path);
  TopicMergeMap merge = load_merge_map(cfg.require("btm", "merge_map"), model.k);

  auto volumes = detail::theme_monthly_volumes(corpus, labels, assignments, merge);
  if (volumes.months.size() < 3)
    throw ValidationError("correlate: need at least 3 months of volume data");
  CsvWriter csv(out_path(cfg, "report_topic_correlations.csv"), {"topic", "r", "p_value", "n"});
  std::int64_t tested = 0, skipped = 0;
  for (const auto& [theme, promo] : volumes.promotional) {
    const auto& lay = volumes.laypeople.at(theme);
    try {
      CorrelationResult r = pearson(promo, lay);
      csv.row({theme, fmt_double(r.r), fmt_double(r.p_value), std::to_string(r.n)});
      ++tested;
    } catch (const ValidationError&) {
      ++skipped;  // constant series carry no signal for this table
    }
  }
  return {{"themes_tested", tested},
          {"themes_skipped_degenerate", skipped},
          {"months", static_cast<std::int64_t>(volumes.months.size())}};
}

namespace detail {

// Theme word weights: theta-weighted mixture of the member topics' phi rows.
inline void write_theme_top_words(const std::string& path, const BtmModel& model,
                                  const TopicMergeMap& merge, std::size_t top_k) {
  std::map<std::string, std::vector<double>> theme_weights;
  std::map<std::string, double> theme_theta;
  const std::size_t v = model.vocab.size();
  for (std::uint32_t z = 0; z < model.k; ++z) {
    auto& weights = theme_weights.try_emplace(merge[z], std::vector<double>(v, 0.0)).first->second;
    for (std::size_t w = 0; w < v; ++w) weights[w] += model.theta[z] * model.phi_at(z, w);
    theme_theta[merge[z]] += model.theta[z];
  }
  CsvWriter csv(path, {"theme", "rank", "word", "weight"});
  for (auto& [theme, weights] : theme_weights) {
    double mass = theme_theta[theme];
    if (mass > 0.0)
      for (double& w : weights) w /= mass;
    std::vector<std::uint32_t> order(v);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (weights[a] != weights[b]) return weights[a] > weights[b];
      return a < b;
    });
    std::size_t k = std::min(top_k, static_cast<std::size_t>(v));
    for (std::size_t rank = 0; rank < k; ++rank)
      csv.row({theme, std::to_string(rank + 1), model.vocab.words[order[rank]],
               fmt_double(weights[order[rank]])});
  }
}

}  // namespace detail

inline StageCounts cmd_pa_subset(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  Corpus corpus = load_pipeline_corpus(cfg);
  auto labels = read_labels_file(cfg);
  KeywordMatcher pa_matcher = load_keyword_file(cfg.require("keywords", "pa_list"));

  Corpus laypeople;
  for (const Post& p : corpus.posts) {
    auto it = labels.find(p.id);
    if (it == labels.end())
      throw ValidationError("pa-subset: post " + p.id + " has no label; rerun classify");
    if (it->second == GroupLabel::laypeople) laypeople.posts.push_back(p);
  }
  Corpus pa = filter_by_keywords(laypeople, pa_matcher);
  save_corpus(pa, out_path(cfg, "pa_corpus.jsonl"));

  // Figure-3-style monthly volume of the subset
  {
    std::vector<std::pair<std::int64_t, double>> points;
    for (const Post& p : pa.posts) points.emplace_back(p.created_at, 1.0);
    MonthlySeries series = monthly_aggregate(points);
    CsvWriter csv(out_path(cfg, "report_pa_monthly_volume.csv"), {"month", "n"});
    for (const auto& pt : series) csv.row({to_string(pt.month), std::to_string(pt.n)});
  }

  StageCounts counts;
  counts["laypeople"] = static_cast<std::int64_t>(laypeople.posts.size());
  counts["pa_matched"] = static_cast<std::int64_t>(pa.posts.size());

  std::string themes_path = out_path(cfg, "report_pa_themes.csv");
  if (pa.posts.empty()) {
    std::cerr << "pa-subset: no laypeople posts match the PA keyword list; "
                 "emitting empty report\n";
    CsvWriter csv(themes_path, {"theme", "rank", "word", "weight"});
    counts["themes"] = 0;
    return counts;
  }

  Stoplist stoplist = stoplist_for(cfg);
  LemmaTable lemmas = lemma_table_for(cfg);
  detail::TopicTokens tokens;
  for (const Post& p : pa.posts) {
    tokens.ids.push_back(p.id);
    tokens.tokens.push_back(normalize_for_topics(p.text, stoplist, lemmas).tokens);
    tokens.groups.push_back(GroupLabel::laypeople);
  }
  std::uint32_t k = static_cast<std::uint32_t>(cfg.get_int("pa", "k", 2));
  double alpha = cfg.get_double("pa", "alpha", default_btm_alpha(k));
  double beta = cfg.get_double("pa", "beta", kDefaultBtmBeta);
  std::size_t iterations = static_cast<std::size_t>(
      cfg.get_int("pa", "iterations", cfg.get_int("btm", "iterations", 500)));
  std::uint64_t seed = cfg.seed_override() ? *cfg.seed_override()
                                           : static_cast<std::uint64_t>(cfg.get_int("pa", "seed", 99));
  auto inputs = detail::build_biterms(tokens, btm_window(cfg, "pa"));
  if (inputs.biterms.empty()) {
    std::cerr << "pa-subset: matched posts yield no biterms; emitting empty report\n";
    CsvWriter csv(themes_path, {"theme", "rank", "word", "weight"});
    counts["themes"] = 0;
    return counts;
  }
  BtmModel model =
      fit_btm(inputs.biterms, std::move(inputs.vocab), k, alpha, beta, iterations, seed);
  save_btm(model, out_path(cfg, "pa.model"));

  TopicMergeMap merge;
  if (auto path = cfg.find("pa", "merge_map")) {
    merge = load_merge_map(*path, model.k);
  } else {
    for (std::uint32_t z = 0; z < model.k; ++z) merge.push_back("topic_" + std::to_string(z));
  }
  detail::write_theme_top_words(themes_path, model, merge,
                                static_cast<std::size_t>(cfg.get_int("pa", "top_words", 15)));
  counts["themes"] =
      static_cast<std::int64_t>(std::set<std::string>(merge.begin(), merge.end()).size());
  return counts;
}

// Assembles every report table derivable from the stage intermediates.
inline StageCounts cmd_report(const RunConfig& cfg) {
  ensure_out_dir(cfg);
  Corpus corpus = load_pipeline_corpus(cfg);
  auto labels = read_labels_file(cfg);
  ScoreFile scores = read_scores_file(cfg);
  auto geo_assignments = read_geo_file(cfg);
  auto topic_assignments = read_assignments_file(cfg);
  std::string model_path = out_path(cfg, "btm.model");
  require_file(model_path, "run the topics-fit stage first");
  BtmModel model = load_btm(model_path);
  TopicMergeMap merge = load_merge_map(cfg.require("btm", "merge_map"), model.k);
  require_file(out_path(cfg, "pa_corpus.jsonl"), "run the pa-subset stage first");

  StageCounts counts;

  // emotion trend tables (monthly means + Mann-Kendall)
  auto monthly = detail::monthly_emotion_table(corpus, scores);
  detail::write_group_score_csv(out_path(cfg, "report_emotion_monthly.csv"), monthly.categories,
                                monthly.rows);
  {
    CsvWriter csv(out_path(cfg, "report_trend_tests.csv"), detail::trend_csv_header());
    for (size_t ci = 0; ci < monthly.categories.size(); ++ci) {
      std::vector<double> series;
      for (const auto& row : monthly.rows) series.push_back(row.mean[ci]);
      csv.row(detail::trend_csv_row(monthly.categories[ci], series.size(),
                                    mann_kendall(series)));
    }
  }
  counts["months"] = static_cast<std::int64_t>(monthly.rows.size());

  // state heatmap
  auto state_rows = state_table(geo_assignments, scores.rows);
  detail::write_group_score_csv(out_path(cfg, "report_state_heatmap.csv"), scores.categories,
                                [&] {
                                  std::vector<GroupScoreRow> rows;
                                  for (const auto& s : state_rows)
                                    rows.push_back(GroupScoreRow{s.state, s.n, s.mean});
                                  return rows;
                                }(),
                                "state");
  counts["states"] = static_cast<std::int64_t>(state_rows.size());

  // per-state trend tables (states with at least 4 scored months)
  {
    std::map<std::string, const Post*> posts_by_id;
    for (const Post& p : corpus.posts) posts_by_id.emplace(p.id, &p);
    std::map<std::string, std::string> state_by_id;
    for (const auto& a : geo_assignments)
      if (a.state) state_by_id[a.post_id] = *a.state;
    struct Acc {
      std::map<YearMonth, std::pair<std::vector<double>, std::size_t>> months;
    };
    std::map<std::string, Acc> by_state;
    for (const auto& [id, sc] : scores.rows) {
      auto sit = state_by_id.find(id);
      if (sit == state_by_id.end()) continue;
      auto pit = posts_by_id.find(id);
      if (pit == posts_by_id.end())
        throw ValidationError("report: scored post " + id + " is not in the corpus");
      auto& slot = by_state[sit->second].months[year_month_of(pit->second->created_at)];
      if (slot.first.empty()) slot.first.assign(sc.pct.size(), 0.0);
      for (size_t i = 0; i < sc.pct.size(); ++i) slot.first[i] += sc.pct[i];
      slot.second += 1;
    }
    CsvWriter csv(out_path(cfg, "report_state_trends.csv"), [] {
      auto h = detail::trend_csv_header();
      h.insert(h.begin(), "state");
      return h;
    }());
    std::int64_t state_series = 0;
    for (const auto& [state, acc] : by_state) {
      if (acc.months.size() < 4) continue;
      for (size_t ci = 0; ci < scores.categories.size(); ++ci) {
        std::vector<double> series;
        for (const auto& [ym, slot] : acc.months)
          series.push_back(slot.first[ci] / static_cast<double>(slot.second));
        auto row = detail::trend_csv_row(scores.categories[ci], series.size(),
                                         mann_kendall(series));
        row.insert(row.begin(), state);
        csv.row(row);
        ++state_series;
      }
    }
    counts["state_series"] = state_series;
  }

  // topic top-words (Figure 7 analog)
  detail::write_top_words_csv(out_path(cfg, "report_topic_top_words.csv"), model,
                              static_cast<std::size_t>(cfg.get_int("btm", "top_words", 20)));

  // theme distribution by tweet type (Figure 8 analog)
  {
    std::vector<TopicAssignment> assignments;
    std::map<std::string, std::string> groups;
    for (const auto& a : topic_assignments) {
      TopicAssignment ta;
      ta.post_id = a.id;
      ta.argmax_topic = a.topic;
      assignments.push_back(std::move(ta));
      auto lit = labels.find(a.id);
      if (lit == labels.end())
        throw ValidationError("report: post " + a.id + " has no label; rerun classify");
      groups[a.id] = to_string(lit->second);
    }
    auto theme_rows = apply_merge(assignments, groups, merge);
    CsvWriter csv(out_path(cfg, "report_theme_distribution.csv"),
                  {"group", "theme", "count", "proportion"});
    for (const auto& row : theme_rows)
      csv.row({row.group, row.theme, std::to_string(row.count), fmt_double(row.proportion)});
    counts["theme_rows"] = static_cast<std::int64_t>(theme_rows.size());
  }

  // monthly topic-volume correlations (Table 5 analog)
  {
    auto volumes = detail::theme_monthly_volumes(corpus, labels, topic_assignments, merge);
    if (volumes.months.size() < 3)
      throw ValidationError("report: need at least 3 months of volume data");
    CsvWriter csv(out_path(cfg, "report_topic_correlations.csv"), {"topic", "r", "p_value", "n"});
    std::int64_t tested = 0;
    for (const auto& [theme, promo] : volumes.promotional) {
      try {
        CorrelationResult r = pearson(promo, volumes.laypeople.at(theme));
        csv.row({theme, fmt_double(r.r), fmt_double(r.p_value), std::to_string(r.n)});
        ++tested;
      } catch (const ValidationError&) {
      }
    }
    counts["correlations"] = tested;
  }

  // PA theme report (Figure 10 analog), from the pa-subset artifacts
  {
    std::string pa_model_path = out_path(cfg, "pa.model");
    if (std::filesystem::exists(pa_model_path)) {
      BtmModel pa_model = load_btm(pa_model_path);
      TopicMergeMap pa_merge;
      if (auto path = cfg.find("pa", "merge_map")) pa_merge = load_merge_map(*path, pa_model.k);
      else
        for (std::uint32_t z = 0; z < pa_model.k; ++z)
          pa_merge.push_back("topic_" + std::to_string(z));
      detail::write_theme_top_words(out_path(cfg, "report_pa_themes.csv"), pa_model, pa_merge,
                                    static_cast<std::size_t>(cfg.get_int("pa", "top_words", 15)));
      counts["pa_themes"] = static_cast<std::int64_t>(
          std::set<std::string>(pa_merge.begin(), pa_merge.end()).size());
    } else {
      CsvWriter csv(out_path(cfg, "report_pa_themes.csv"), {"theme", "rank", "word", "weight"});
      counts["pa_themes"] = 0;
    }
  }
  return counts;
}

}  // namespace miner::pipeline
