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
//
// Acceptance suite. Each criterion prints one PASS/FAIL line; the binary
// fails if any criterion fails.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "miner/btm.hpp"
#include "miner/classify.hpp"
#include "miner/csv.hpp"
#include "miner/sentiment.hpp"
#include "miner/stats.hpp"
#include "miner/textprep.hpp"
#include "support/tempdir.hpp"

using namespace miner;
using testutil::TempDir;

namespace {

struct Criterion {
  int id;
  const char* title;
  bool ok = true;
  int uncaught_at_entry;
  Criterion(int id_, const char* title_)
      : id(id_), title(title_), uncaught_at_entry(std::uncaught_exceptions()) {}
  ~Criterion() {
    if (std::uncaught_exceptions() > uncaught_at_entry) ok = false;  // aborted mid-case
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, title);
    std::fflush(stdout);
  }
  bool expect(bool cond) {
    ok = ok && cond;
    return cond;
  }
};

#define ACHECK(crit, ...) CHECK((crit).expect(static_cast<bool>(__VA_ARGS__)))

double u01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

// ------------------------------------------------------------------ 1

TEST_CASE("criterion 1: Mann-Kendall oracle equivalence") {
  Criterion crit(1, "Mann-Kendall matches brute force on 1000 tied series");
  auto start = Clock::now();
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    size_t n = 4 + rng() % 47;
    std::vector<double> x(n);
    for (auto& v : x)
      v = static_cast<double>(rng() % 6) + (rng() % 4 == 0 ? 0.25 : 0.0);  // injected ties

    long long s = 0;
    for (size_t j = 1; j < n; ++j)
      for (size_t i = 0; i < j; ++i) s += (x[j] > x[i]) - (x[j] < x[i]);
    std::map<double, size_t> ties;
    for (double v : x) ++ties[v];
    double corr = 0.0;
    for (const auto& [v, t] : ties)
      corr += static_cast<double>(t) * (t - 1.0) * (2.0 * t + 5.0);
    double dn = static_cast<double>(n);
    double var_oracle = (dn * (dn - 1.0) * (2.0 * dn + 5.0) - corr) / 18.0;

    TrendResult r = mann_kendall(x);
    ACHECK(crit, r.s == s);
    ACHECK(crit, std::abs(r.var_s - var_oracle) <= 1e-9);
  }
  {
    TrendResult r = mann_kendall(std::vector<double>{1, 2, 3, 4, 5});
    ACHECK(crit, r.s == 10);
    ACHECK(crit, r.verdict == Trend::increasing);
  }
  {
    TrendResult r = mann_kendall(std::vector<double>{3, 1, 2, 5, 4});
    ACHECK(crit, r.s == 4);
    ACHECK(crit, std::abs(r.p_value - 0.462) <= 1e-3);
  }
  ACHECK(crit, seconds_since(start) < 5.0);
}

// ------------------------------------------------------------------ 2

TEST_CASE("criterion 2: Pearson oracle equivalence and invariances") {
  Criterion crit(2, "Pearson matches the direct-formula oracle on 1000 pairs");
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 1000; ++trial) {
    size_t n = 3 + rng() % 58;
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = u01(rng);
      y[i] = 0.5 * x[i] + u01(rng);
    }
    // direct raw-sums formula, a different algebraic route
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
      sx += x[i];
      sy += y[i];
      sxy += x[i] * y[i];
      sxx += x[i] * x[i];
      syy += y[i] * y[i];
    }
    double dn = static_cast<double>(n);
    double r_oracle = (dn * sxy - sx * sy) /
                      std::sqrt((dn * sxx - sx * sx) * (dn * syy - sy * sy));
    CorrelationResult r = pearson(x, y);
    ACHECK(crit, std::abs(r.r - r_oracle) <= 1e-12);
    ACHECK(crit, std::abs(r.r) <= 1.0 + 1e-12);

    // invariances
    double a = 0.1 + u01(rng) * 3.0, b = (u01(rng) - 0.5) * 20.0;
    std::vector<double> ax(n), negx(n);
    for (size_t i = 0; i < n; ++i) {
      ax[i] = a * x[i] + b;
      negx[i] = -x[i];
    }
    ACHECK(crit, std::abs(pearson(ax, y).r - r.r) <= 1e-12);
    ACHECK(crit, std::abs(pearson(negx, y).r + r.r) <= 1e-12);
  }
  {
    std::vector<double> x{1, 2, 3}, y{1, 2, 4};
    ACHECK(crit, std::abs(pearson(x, y).r - 9.0 / std::sqrt(84.0)) <= 1e-9);
  }
}

// ------------------------------------------------------------------ 3

TEST_CASE("criterion 3: biterm sampler integrity") {
  Criterion crit(3, "count conservation each sweep, normalization, determinism");
  std::mt19937_64 rng(33);
  Vocab vocab;
  for (int i = 0; i < 40; ++i) vocab.add("w" + std::to_string(i));
  std::vector<Biterm> biterms;
  for (int i = 0; i < 1000; ++i) biterms.push_back(make_biterm(rng() % 40, rng() % 40));

  const std::uint32_t k = 7;
  bool conserved = true;
  auto observer = [&](std::size_t, const std::vector<std::int64_t>& n_z,
                      const std::vector<std::int64_t>& n_wz) {
    std::int64_t total = std::accumulate(n_z.begin(), n_z.end(), std::int64_t{0});
    if (total != 1000) conserved = false;
    for (size_t z = 0; z < n_z.size(); ++z) {
      std::int64_t row = 0;
      for (size_t w = 0; w < 40; ++w) row += n_wz[z * 40 + w];
      if (row != 2 * n_z[z] || n_z[z] < 0) conserved = false;
    }
  };
  BtmModel model = fit_btm(biterms, vocab, k, 50.0 / k, 0.01, 60, 5, observer);
  ACHECK(crit, conserved);

  for (std::uint32_t z = 0; z < k; ++z) {
    double row = 0.0;
    for (size_t w = 0; w < 40; ++w) row += model.phi_at(z, w);
    ACHECK(crit, std::abs(row - 1.0) <= 1e-9);
  }
  ACHECK(crit,
         std::abs(std::accumulate(model.theta.begin(), model.theta.end(), 0.0) - 1.0) <= 1e-9);

  BtmModel rerun = fit_btm(biterms, vocab, k, 50.0 / k, 0.01, 60, 5);
  ACHECK(crit, rerun.topic_biterms == model.topic_biterms);
  ACHECK(crit, rerun.topic_word_count == model.topic_word_count);
  ACHECK(crit, rerun.phi == model.phi);
  ACHECK(crit, rerun.theta == model.theta);
}

// ------------------------------------------------------------------ 4

TEST_CASE("criterion 4: planted-topic recovery") {
  Criterion crit(4, "two disjoint 50-word vocabularies recovered at purity >= 0.9");
  auto start = Clock::now();
  Vocab vocab;
  for (int i = 0; i < 50; ++i) vocab.add("a" + std::to_string(i));
  for (int i = 0; i < 50; ++i) vocab.add("b" + std::to_string(i));
  std::mt19937_64 rng(44);
  std::vector<Biterm> biterms;
  for (int doc = 0; doc < 400; ++doc) {
    std::uint32_t base = doc % 2 == 0 ? 0u : 50u;
    std::vector<std::uint32_t> ids;
    size_t len = 6 + rng() % 5;
    for (size_t t = 0; t < len; ++t) ids.push_back(base + rng() % 50);
    auto doc_biterms = extract_biterms(ids, ids.size());
    biterms.insert(biterms.end(), doc_biterms.begin(), doc_biterms.end());
  }
  BtmModel model = fit_btm(biterms, vocab, 2, 25.0, 0.01, 500, 6);
  std::set<char> leads;
  for (std::uint32_t z = 0; z < 2; ++z) {
    auto words = top_words(model, z, 10);
    size_t from_a = 0;
    for (const auto& [w, weight] : words)
      if (w[0] == 'a') ++from_a;
    double purity = static_cast<double>(std::max(from_a, 10 - from_a)) / 10.0;
    ACHECK(crit, purity >= 0.9);
    leads.insert(words[0].first[0]);
  }
  ACHECK(crit, leads.size() == 2);  // each topic claims a different vocabulary
  ACHECK(crit, seconds_since(start) < 30.0);
}

// ------------------------------------------------------------------ 5

TEST_CASE("criterion 5: K=1 closed form") {
  Criterion crit(5, "K=1 phi equals smoothed empirical frequencies within 1e-9");
  std::mt19937_64 rng(55);
  const size_t v = 25;
  Vocab vocab;
  for (size_t i = 0; i < v; ++i) vocab.add("w" + std::to_string(i));
  std::vector<Biterm> biterms;
  std::vector<double> word_count(v, 0.0);
  for (int i = 0; i < 700; ++i) {
    Biterm b = make_biterm(rng() % v, rng() % v);
    biterms.push_back(b);
    word_count[b.w1] += 1.0;
    word_count[b.w2] += 1.0;
  }
  const double beta = 0.01;
  BtmModel model = fit_btm(biterms, vocab, 1, 50.0, beta, 10, 9);
  ACHECK(crit, model.theta.size() == 1);
  ACHECK(crit, std::abs(model.theta[0] - 1.0) <= 1e-12);
  double denom = 2.0 * 700.0 + static_cast<double>(v) * beta;
  for (size_t w = 0; w < v; ++w)
    ACHECK(crit, std::abs(model.phi_at(0, w) - (word_count[w] + beta) / denom) <= 1e-9);
}

// ------------------------------------------------------------------ 6

TEST_CASE("criterion 6: classifier correctness") {
  Criterion crit(6, "gradient check, separable accuracy, exact P/R/F, partition");
  std::mt19937_64 rng(66);
  const std::uint32_t dims = 10;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Example> batch;
    size_t n = 1 + rng() % 4;
    for (size_t e = 0; e < n; ++e) {
      FeatureVector fv;
      for (std::uint32_t i = 0; i < dims; ++i)
        if (rng() % 3 == 0) {
          fv.indices.push_back(i);
          fv.values.push_back(u01(rng) * 4.0 - 2.0);
        }
      batch.push_back(Example{std::move(fv), rng() % 2 == 0});
    }
    std::vector<double> w(dims);
    for (auto& x : w) x = u01(rng) * 2.0 - 1.0;
    double bias = u01(rng) - 0.5;
    double l2 = u01(rng) * 0.1;
    LossGradient g = loss_and_gradient(batch, w, bias, l2, dims);
    const double h = 1e-6;
    for (std::uint32_t i = 0; i < dims; ++i) {
      std::vector<double> wp = w, wm = w;
      wp[i] += h;
      wm[i] -= h;
      double numeric = (loss_and_gradient(batch, wp, bias, l2, dims).loss -
                        loss_and_gradient(batch, wm, bias, l2, dims).loss) /
                       (2.0 * h);
      double denom = std::max({std::abs(numeric), std::abs(g.grad_weights[i]), 1e-4});
      ACHECK(crit, std::abs(numeric - g.grad_weights[i]) / denom < 1e-5);
    }
  }

  // separable toy set reaches perfect training accuracy
  std::vector<Example> data;
  for (int i = 0; i < 5; ++i) {
    FeatureVector pos, neg;
    pos.indices = {0, 1};
    pos.values = {1.0 + 0.1 * i, 0.2};
    neg.indices = {0, 1};
    neg.values = {0.2, 1.0 + 0.1 * i};
    data.push_back(Example{pos, true});
    data.push_back(Example{neg, false});
  }
  TrainConfig tcfg;
  tcfg.features.dims = 4;
  tcfg.epochs = 200;
  tcfg.learning_rate = 0.5;
  tcfg.l2 = 0.0;
  tcfg.batch_size = 4;
  tcfg.seed = 3;
  LinearModel toy = train(data, Stage::relevance, tcfg);
  size_t correct = 0;
  for (const Example& ex : data)
    if ((predict(toy, ex.features) >= 0.5) == ex.label) ++correct;
  ACHECK(crit, correct == data.size());

  // exact confusion-matrix arithmetic: tp=3 fp=1 fn=2 tn=4
  LinearModel m;
  m.dims = 2;
  m.embed_dim = 0;
  m.weights = {10.0, 0.0};
  m.bias = -5.0;
  std::vector<Example> test;
  FeatureVector on, off;
  on.indices = {0};
  on.values = {1.0};
  off.indices = {1};
  off.values = {1.0};
  for (int i = 0; i < 3; ++i) test.push_back(Example{on, true});
  test.push_back(Example{on, false});
  for (int i = 0; i < 2; ++i) test.push_back(Example{off, true});
  for (int i = 0; i < 4; ++i) test.push_back(Example{off, false});
  EvalReport report = evaluate(m, test);
  double p = 3.0 / (3.0 + 1.0), r = 3.0 / (3.0 + 2.0);
  ACHECK(crit, report.tp == 3);
  ACHECK(crit, report.fp == 1);
  ACHECK(crit, report.fn == 2);
  ACHECK(crit, report.precision == p);
  ACHECK(crit, report.recall == r);
  ACHECK(crit, report.f_score == 2.0 * p * r / (p + r));

  // two-stage labels always partition the corpus
  for (int trial = 0; trial < 10; ++trial) {
    Corpus corpus;
    const char* pool[] = {"cancer screening news", "donate pink charity", "mom hope family",
                          "weather and sports", "random words here"};
    size_t n = 1 + rng() % 40;
    for (size_t i = 0; i < n; ++i)
      corpus.posts.push_back(Post{"p" + std::to_string(i), static_cast<std::int64_t>(i),
                                  pool[rng() % 5], {}, {}, Source::search_archive});
    FeatureConfig fcfg;
    fcfg.dims = 1 << 10;
    LinearModel s1, s2;
    s1.dims = s2.dims = fcfg.dims;
    s1.embed_dim = s2.embed_dim = 0;
    s1.stage = Stage::relevance;
    s2.stage = Stage::audience;
    s1.weights.assign(fcfg.dims, 0.0);
    s2.weights.assign(fcfg.dims, 0.0);
    for (auto& x : s1.weights) x = u01(rng) * 2.0 - 1.0;
    for (auto& x : s2.weights) x = u01(rng) * 2.0 - 1.0;
    auto labels = classify_two_stage(corpus, s1, s2, fcfg);
    std::map<GroupLabel, size_t> hist;
    for (const auto& [id, gl] : labels) ++hist[gl];
    ACHECK(crit, labels.size() == corpus.posts.size());
    ACHECK(crit, hist[GroupLabel::irrelevant] + hist[GroupLabel::promotional] +
                         hist[GroupLabel::laypeople] ==
                     corpus.posts.size());
  }
}

// ------------------------------------------------------------------ 7

TEST_CASE("criterion 7: sentiment oracle equivalence") {
  Criterion crit(7, "score matches brute force on 1000 random texts");
  ACHECK(crit, normalize_for_sentiment("#breastcancer") == "breastcancer");

  std::mt19937_64 rng(77);
  const char* pool[] = {"hope", "hopes", "love",  "loved", "lovely", "bad",  "sad",  "sadly",
                        "fear", "fears", "mad",   "angry", "worry",  "cry",  "tear", "alpha",
                        "beta", "gamma", "delta", "omega", "zeta",   "iota", "kappa"};
  const size_t pool_n = sizeof(pool) / sizeof(pool[0]);
  const auto& names = default_emotion_categories();

  for (int trial = 0; trial < 1000; ++trial) {
    // randomized lexicon: 1-4 literals and 0-2 prefixes per category
    LexiconSet lex;
    for (const auto& name : names) {
      LexiconCategory cat;
      cat.name = name;
      size_t n_lit = 1 + rng() % 4;
      for (size_t i = 0; i < n_lit; ++i) cat.literals.insert(pool[rng() % pool_n]);
      size_t n_pre = rng() % 3;
      for (size_t i = 0; i < n_pre; ++i) {
        std::string w = pool[rng() % pool_n];
        cat.prefixes.push_back(w.substr(0, 2 + rng() % 3));
      }
      lex.categories.push_back(std::move(cat));
    }
    size_t n_tokens = rng() % 31;
    std::vector<std::string> tokens;
    std::string text;
    for (size_t i = 0; i < n_tokens; ++i) {
      std::string w = pool[rng() % pool_n];
      tokens.push_back(w);
      if (i) text += ' ';
      text += w;
    }
    EmotionScores got = score(text, lex);
    ACHECK(crit, got.token_count == tokens.size());
    for (size_t ci = 0; ci < lex.categories.size(); ++ci) {
      size_t hits = 0;
      for (const auto& tok : tokens) {
        bool hit = lex.categories[ci].literals.count(tok) > 0;
        for (const auto& pre : lex.categories[ci].prefixes)
          if (!hit && tok.size() >= pre.size() && tok.compare(0, pre.size(), pre) == 0) hit = true;
        if (hit) ++hits;
      }
      double expected =
          tokens.empty() ? 0.0
                         : 100.0 * static_cast<double>(hits) / static_cast<double>(tokens.size());
      ACHECK(crit, got.pct[ci] == expected);
    }
  }
}

// ------------------------------------------------------------------ 8

TEST_CASE("criterion 8: normalization golden file") {
  Criterion crit(8, "25 golden classification-normalization cases, bit-exact");
  std::ifstream in(std::string(TESTS_DATA_DIR) + "/norm_golden.tsv");
  ACHECK(crit, static_cast<bool>(in));
  std::string line;
  size_t cases = 0;
  while (std::getline(in, line)) {
    size_t tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    std::string input = line.substr(0, tab);
    std::string expected = line.substr(tab + 1);
    TokenStream ts = normalize_for_classification(input);
    std::string got;
    for (size_t i = 0; i < ts.tokens.size(); ++i) {
      if (i) got += ' ';
      got += ts.tokens[i];
    }
    bool same = got == expected;
    ACHECK(crit, same);
    if (!same)
      MESSAGE("input [", input, "] expected [", expected, "] got [", got, "]");
    ++cases;
  }
  ACHECK(crit, cases == 25);
}

// ------------------------------------------------------------------ 9 / 10

namespace {

int run_cli(const std::string& args, const std::string& log_path) {
  std::string cmd = std::string(MINER_BIN) + " " + args + " >>" + log_path + " 2>&1";
  int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  if (WIFEXITED(rc)) return WEXITSTATUS(rc);
  return -2;
}

std::string e2e_config(const TempDir& dir, const std::string& out_dir) {
  std::string fixtures = std::string(REPO_DATA_DIR) + "/fixtures";
  std::string data = REPO_DATA_DIR;
  std::ostringstream conf;
  conf << "[inputs]\n"
       << "posts = " << fixtures << "/corpus_raw.jsonl\n"
       << "lang_filter = en\nparse = strict\nkeyword_filter = true\n"
       << "[keywords]\n"
       << "topic_list = " << data << "/keywords_breast_cancer.txt\n"
       << "pa_list = " << data << "/keywords_pa.txt\n"
       << "[lexicon]\npath = " << data << "/lexicon_demo.tsv\n"
       << "[classifier]\n"
       << "annotations = " << fixtures << "/annotations.tsv\n"
       << "dims = 65536\nepochs = 40\nlearning_rate = 0.5\nl2 = 0.0001\nbatch = 16\nseed = 7\n"
       << "[btm]\n"
       << "k = 4\nbeta = 0.01\niterations = 400\nseed = 42\nwindow = 0\n"
       << "merge_map = " << fixtures << "/merge_map.tsv\ntop_words = 15\n"
       << "[pa]\nk = 2\niterations = 300\nseed = 99\n"
       << "merge_map = " << fixtures << "/pa_merge_map.tsv\n"
       << "[sentiment]\ngroup = laypeople\n"
       << "[output]\ndir = " << out_dir << "\n";
  return dir.write("run.conf", conf.str());
}

const std::vector<std::string>& e2e_stages() {
  static const std::vector<std::string> stages{
      "ingest",      "suggest",   "classify-train", "classify", "sentiment", "geocode",
      "trend",       "topics-fit", "topics-infer",  "correlate", "pa-subset", "report"};
  return stages;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(static_cast<bool>(in));
  nlohmann::json j;
  in >> j;
  return j;
}

std::string g_e2e_out;  // filled by criterion 9, consumed by criterion 10

}  // namespace

TEST_CASE("criterion 9: end-to-end fixture run") {
  Criterion crit(9, "full pipeline on the bundled 500-post corpus, byte-identical rerun");
  TempDir dir("e2e");
  std::string out1 = dir.file("out1"), out2 = dir.file("out2");
  std::string log = dir.file("cli.log");
  std::string conf1 = e2e_config(dir, out1);

  auto start = Clock::now();
  for (const auto& stage : e2e_stages()) {
    int rc = run_cli(stage + " --config " + conf1, log);
    ACHECK(crit, rc == 0);
    if (rc != 0) {
      MESSAGE("stage ", stage, " failed; log follows:\n", testutil::slurp(log));
      return;
    }
  }
  double elapsed = seconds_since(start);
  ACHECK(crit, elapsed < 60.0);

  // every expected artifact exists
  const char* artifacts[] = {"corpus.jsonl",
                             "corpus.jsonl.provenance.json",
                             "keyword_suggestions.csv",
                             "classifier_eval.csv",
                             "labels.tsv",
                             "sentiment_scores.csv",
                             "geo_states.csv",
                             "report_emotion_monthly.csv",
                             "report_trend_tests.csv",
                             "btm.model",
                             "report_topic_top_words.csv",
                             "topic_assignments.csv",
                             "report_topic_correlations.csv",
                             "pa_corpus.jsonl",
                             "report_pa_monthly_volume.csv",
                             "report_pa_themes.csv",
                             "pa.model",
                             "report_state_heatmap.csv",
                             "report_state_trends.csv",
                             "report_theme_distribution.csv"};
  for (const char* name : artifacts)
    ACHECK(crit, std::filesystem::exists(std::filesystem::path(out1) / name));

  // manifest conservation identities
  nlohmann::json m_ingest = read_json(out1 + "/manifest_ingest.json");
  const auto& ingest = m_ingest["counts"];
  ACHECK(crit, ingest["records_read"].get<long long>() ==
                   ingest["posts_kept"].get<long long>() +
                       ingest["dropped_duplicate"].get<long long>() +
                       ingest["dropped_language"].get<long long>() +
                       ingest["dropped_filter"].get<long long>());
  ACHECK(crit, ingest["posts_kept"].get<long long>() == 500);

  nlohmann::json m_classify = read_json(out1 + "/manifest_classify.json");
  const auto& classify = m_classify["counts"];
  long long posts = classify["posts"].get<long long>();
  ACHECK(crit, posts == ingest["posts_kept"].get<long long>());
  ACHECK(crit, classify["irrelevant"].get<long long>() +
                       classify["promotional"].get<long long>() +
                       classify["laypeople"].get<long long>() ==
                   posts);

  nlohmann::json m_infer = read_json(out1 + "/manifest_topics_infer.json");
  const auto& infer = m_infer["counts"];
  ACHECK(crit, infer["posts"].get<long long>() ==
                   classify["promotional"].get<long long>() +
                       classify["laypeople"].get<long long>());

  nlohmann::json m_sentiment = read_json(out1 + "/manifest_sentiment.json");
  const auto& sentiment = m_sentiment["counts"];
  ACHECK(crit, sentiment["posts_scored"].get<long long>() ==
                   classify["laypeople"].get<long long>());

  // second run: byte-identical data outputs, manifests equal modulo wall clock
  std::string conf2 = e2e_config(dir, out2);
  for (const auto& stage : e2e_stages()) {
    int rc = run_cli(stage + " --config " + conf2, log);
    ACHECK(crit, rc == 0);
  }
  size_t compared = 0;
  for (const auto& entry : std::filesystem::directory_iterator(out1)) {
    std::string name = entry.path().filename().string();
    std::filesystem::path other = std::filesystem::path(out2) / name;
    ACHECK(crit, std::filesystem::exists(other));
    if (!std::filesystem::exists(other)) continue;
    if (name.rfind("manifest_", 0) == 0) {
      nlohmann::json a = read_json(entry.path().string());
      nlohmann::json b = read_json(other.string());
      a.erase("wall_clock_ms");
      b.erase("wall_clock_ms");
      // the config snapshot differs only in the output dir override
      a["config"].erase("output.dir");
      b["config"].erase("output.dir");
      ACHECK(crit, a == b);
    } else {
      ACHECK(crit, testutil::slurp(entry.path().string()) == testutil::slurp(other.string()));
      ++compared;
    }
  }
  ACHECK(crit, compared >= 20);
  g_e2e_out = out1;
}

TEST_CASE("criterion 10: report schema conformance") {
  Criterion crit(10, "trend, correlation and heatmap tables carry the pinned columns");
  REQUIRE(!g_e2e_out.empty());
  CsvTable trend = read_csv(g_e2e_out + "/report_trend_tests.csv");
  ACHECK(crit, trend.header == std::vector<std::string>{"series_name", "n", "S", "var_S", "Z",
                                                        "p_value", "verdict"});
  ACHECK(crit, trend.rows.size() == 5);
  for (const auto& row : trend.rows) {
    ACHECK(crit, row.size() == 7);
    ACHECK(crit, row[6] == "increasing" || row[6] == "decreasing" ||
                     row[6] == "not significant");
  }

  CsvTable corr = read_csv(g_e2e_out + "/report_topic_correlations.csv");
  ACHECK(crit, corr.header == std::vector<std::string>{"topic", "r", "p_value", "n"});
  for (const auto& row : corr.rows) {
    double r = std::stod(row[1]);
    double p = std::stod(row[2]);
    ACHECK(crit, r >= -1.0 - 1e-12);
    ACHECK(crit, r <= 1.0 + 1e-12);
    ACHECK(crit, p >= 0.0);
    ACHECK(crit, p <= 1.0);
  }

  CsvTable heat = read_csv(g_e2e_out + "/report_state_heatmap.csv");
  ACHECK(crit, heat.header == std::vector<std::string>{"state", "n", "positive_emotion",
                                                       "negative_emotion", "anxiety", "anger",
                                                       "sadness"});
  for (const auto& row : heat.rows) ACHECK(crit, row[0].size() == 2);

  CsvTable monthly = read_csv(g_e2e_out + "/report_emotion_monthly.csv");
  ACHECK(crit, monthly.header == std::vector<std::string>{"group", "n", "positive_emotion",
                                                          "negative_emotion", "anxiety", "anger",
                                                          "sadness"});
}

// ------------------------------------------------------------ extras

TEST_CASE("stage errors propagate as nonzero exit codes") {
  TempDir dir("exitcodes");
  std::string log = dir.file("cli.log");

  // a 3-month corpus is too short for the trend test
  std::ostringstream jsonl;
  std::string labels;
  for (int i = 0; i < 6; ++i) {
    nlohmann::json j{{"id", "s" + std::to_string(i)},
                     {"created_at", "2017-0" + std::to_string(1 + i % 3) + "-10T00:00:00Z"},
                     {"text", "the breast cancer post number " + std::to_string(i) +
                                  " with hope and the usual words"},
                     {"lang", "en"}};
    jsonl << j.dump() << "\n";
    labels += "s" + std::to_string(i) + "\tlaypeople\n";
  }
  std::string posts = dir.write("tiny.jsonl", jsonl.str());
  std::string lex = std::string(REPO_DATA_DIR) + "/lexicon_demo.tsv";
  std::string out = dir.file("out");
  std::ostringstream conf;
  conf << "[inputs]\nposts = " << posts << "\n[lexicon]\npath = " << lex << "\n"
       << "[output]\ndir = " << out << "\n";
  std::string cfg = dir.write("tiny.conf", conf.str());

  CHECK(run_cli("ingest --config " + cfg, log) == 0);
  {
    std::ofstream lf(out + "/labels.tsv");
    lf << labels;
  }
  CHECK(run_cli("sentiment --config " + cfg, log) == 0);
  CHECK(run_cli("trend --config " + cfg, log) == 2);  // series too short -> validation error

  // missing upstream artifact
  std::string out2 = dir.file("out2");
  std::ostringstream conf2;
  conf2 << "[inputs]\nposts = " << posts << "\n[lexicon]\npath = " << lex << "\n"
        << "[output]\ndir = " << out2 << "\n";
  std::string cfg2 = dir.write("fresh.conf", conf2.str());
  CHECK(run_cli("sentiment --config " + cfg2, log) == 2);

  // unreadable config
  CHECK(run_cli("ingest --config " + dir.file("absent.conf"), log) != 0);
}
