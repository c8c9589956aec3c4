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

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "miner/classify.hpp"
#include "support/tempdir.hpp"

using namespace miner;
using testutil::TempDir;

namespace {

// Independent FNV-1a oracle for the hashing route.
std::uint64_t fnv_oracle(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;  // offset basis, spelled in decimal
  for (unsigned char c : s) {
    h = h ^ c;
    h = h * 1099511628211ull;
  }
  return h;
}

TokenStream toks(std::vector<std::string> tokens) {
  TokenStream ts;
  ts.tokens = std::move(tokens);
  return ts;
}

FeatureVector fv_of(std::vector<std::pair<std::uint32_t, double>> entries,
                    std::vector<double> dense = {}) {
  FeatureVector fv;
  for (auto& [i, v] : entries) {
    fv.indices.push_back(i);
    fv.values.push_back(v);
  }
  fv.dense = std::move(dense);
  return fv;
}

double u01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

}  // namespace

TEST_CASE("featurize hashes unigrams and bigrams deterministically") {
  FeatureConfig cfg;
  cfg.dims = 16;

  SUBCASE("empty tokens") {
    FeatureVector fv = featurize(toks({}), cfg);
    CHECK(fv.indices.empty());
    CHECK(fv.dense.empty());
  }
  SUBCASE("repeated token counts, plus the bigram") {
    FeatureVector fv = featurize(toks({"a", "a"}), cfg);
    std::map<std::uint32_t, double> expected;
    expected[static_cast<std::uint32_t>(fnv_oracle("a") % 16)] += 2.0;
    expected[static_cast<std::uint32_t>(fnv_oracle("a a") % 16)] += 1.0;
    REQUIRE(fv.indices.size() == expected.size());
    for (size_t i = 0; i < fv.indices.size(); ++i)
      CHECK(fv.values[i] == expected.at(fv.indices[i]));
  }
  SUBCASE("determinism") {
    FeatureVector a = featurize(toks({"a", "b"}), cfg);
    FeatureVector b = featurize(toks({"a", "b"}), cfg);
    CHECK(a.indices == b.indices);
    CHECK(a.values == b.values);
  }
  SUBCASE("indices strictly increasing and under dims") {
    FeatureVector fv = featurize(toks({"w1", "w2", "w3", "w4", "w5"}), cfg);
    for (size_t i = 1; i < fv.indices.size(); ++i) CHECK(fv.indices[i] > fv.indices[i - 1]);
    for (auto idx : fv.indices) CHECK(idx < cfg.dims);
  }
}

TEST_CASE("embedding table loading and averaging") {
  TempDir dir("embeddings");
  std::string path = dir.write("emb.txt", "hello 1 2 3\nworld 3 4 5\n");
  EmbeddingTable table = load_embeddings(path);
  CHECK(table.dim == 3);

  FeatureConfig cfg;
  cfg.dims = 16;
  FeatureVector fv = featurize(toks({"hello", "world", "unknown"}), cfg, &table);
  REQUIRE(fv.dense.size() == 3);
  CHECK(fv.dense[0] == doctest::Approx(2.0));
  CHECK(fv.dense[1] == doctest::Approx(3.0));
  CHECK(fv.dense[2] == doctest::Approx(4.0));

  FeatureVector none = featurize(toks({"unknown"}), cfg, &table);
  CHECK(none.dense == std::vector<double>{0.0, 0.0, 0.0});

  std::string bad = dir.write("bad.txt", "a 1 2\nb 1 2 3\n");
  CHECK_THROWS_AS(load_embeddings(bad), ValidationError);
}

TEST_CASE("predict is the sigmoid of the affine score") {
  LinearModel m;
  m.dims = 8;
  m.embed_dim = 0;
  m.weights.assign(8, 0.0);

  SUBCASE("zero weights give probability one half") {
    CHECK(predict(m, fv_of({{1, 1.0}, {5, 2.0}})) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("all-zero features give sigmoid of the bias") {
    m.bias = 0.7;
    CHECK(predict(m, fv_of({})) == doctest::Approx(1.0 / (1.0 + std::exp(-0.7))).epsilon(1e-15));
  }
  SUBCASE("closed-form two-feature check") {
    m.weights[2] = 0.5;
    m.weights[3] = -1.25;
    m.bias = 0.25;
    double z = 0.25 + 0.5 * 3.0 - 1.25 * 2.0;
    CHECK(predict(m, fv_of({{2, 3.0}, {3, 2.0}})) ==
          doctest::Approx(1.0 / (1.0 + std::exp(-z))).epsilon(1e-12));
  }
  SUBCASE("scaling weights and bias preserves the thresholded label") {
    m.weights[2] = 0.4;
    m.bias = -0.3;
    FeatureVector fv = fv_of({{2, 2.0}});
    bool label = predict(m, fv) >= 0.5;
    m.weights[2] *= 2.0;
    m.bias *= 2.0;
    CHECK((predict(m, fv) >= 0.5) == label);
  }
  SUBCASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(predict(m, fv_of({{9, 1.0}})), ValidationError);
    CHECK_THROWS_AS(predict(m, fv_of({{1, 1.0}}, {0.5})), ValidationError);
  }
}

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937_64 rng(101);
  const std::uint32_t dims = 12;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Example> batch;
    size_t n = 1 + rng() % 5;
    for (size_t e = 0; e < n; ++e) {
      FeatureVector fv;
      for (std::uint32_t i = 0; i < dims; ++i) {
        if (rng() % 3 == 0) {
          fv.indices.push_back(i);
          fv.values.push_back(u01(rng) * 4.0 - 2.0);
        }
      }
      batch.push_back(Example{std::move(fv), rng() % 2 == 0});
    }
    std::vector<double> w(dims);
    for (auto& v : w) v = u01(rng) * 2.0 - 1.0;
    double bias = u01(rng) - 0.5;
    double l2 = u01(rng) * 0.1;

    LossGradient g = loss_and_gradient(batch, w, bias, l2, dims);
    const double h = 1e-6;
    for (std::uint32_t i = 0; i < dims; ++i) {
      std::vector<double> wp = w, wm = w;
      wp[i] += h;
      wm[i] -= h;
      double fp = loss_and_gradient(batch, wp, bias, l2, dims).loss;
      double fm = loss_and_gradient(batch, wm, bias, l2, dims).loss;
      double numeric = (fp - fm) / (2.0 * h);
      double denom = std::max({std::abs(numeric), std::abs(g.grad_weights[i]), 1e-4});
      CHECK(std::abs(numeric - g.grad_weights[i]) / denom < 1e-5);
    }
    double fp = loss_and_gradient(batch, w, bias + h, l2, dims).loss;
    double fm = loss_and_gradient(batch, w, bias - h, l2, dims).loss;
    double numeric = (fp - fm) / (2.0 * h);
    double denom = std::max({std::abs(numeric), std::abs(g.grad_bias), 1e-4});
    CHECK(std::abs(numeric - g.grad_bias) / denom < 1e-5);
  }
}

TEST_CASE("training reaches accuracy 1.0 on a separable toy set") {
  // 10 points in 2 features, separated by x0 - x1
  std::vector<Example> data;
  for (int i = 0; i < 5; ++i) {
    data.push_back(Example{fv_of({{0, 1.0 + 0.1 * i}, {1, 0.2}}), true});
    data.push_back(Example{fv_of({{0, 0.2}, {1, 1.0 + 0.1 * i}}), false});
  }
  TrainConfig cfg;
  cfg.features.dims = 4;
  cfg.epochs = 200;
  cfg.learning_rate = 0.5;
  cfg.l2 = 0.0;
  cfg.batch_size = 4;
  cfg.seed = 3;
  LinearModel model = train(data, Stage::relevance, cfg);
  for (const Example& ex : data)
    CHECK((predict(model, ex.features) >= 0.5) == ex.label);
}

TEST_CASE("training is deterministic for a fixed seed") {
  std::vector<Example> data;
  std::mt19937_64 rng(55);
  for (int i = 0; i < 30; ++i) {
    FeatureVector fv = fv_of({{static_cast<std::uint32_t>(rng() % 8), 1.0},
                              {8 + static_cast<std::uint32_t>(rng() % 8), u01(rng)}});
    data.push_back(Example{std::move(fv), rng() % 2 == 0});
  }
  TrainConfig cfg;
  cfg.features.dims = 16;
  cfg.epochs = 20;
  cfg.seed = 42;
  LinearModel a = train(data, Stage::relevance, cfg);
  LinearModel b = train(data, Stage::relevance, cfg);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
}

TEST_CASE("training rejects degenerate label sets") {
  std::vector<Example> data{Example{fv_of({{0, 1.0}}), true}, Example{fv_of({{1, 1.0}}), true}};
  TrainConfig cfg;
  cfg.features.dims = 4;
  CHECK_THROWS_WITH_AS(train(data, Stage::relevance, cfg), "train: degenerate labels",
                       ValidationError);
  CHECK_THROWS_AS(train({data[0]}, Stage::relevance, cfg), ValidationError);
}

TEST_CASE("evaluate reproduces hand confusion-matrix arithmetic") {
  // model that predicts positive iff feature 0 is set
  LinearModel m;
  m.dims = 2;
  m.embed_dim = 0;
  m.weights = {10.0, 0.0};
  m.bias = -5.0;

  std::vector<Example> test;
  for (int i = 0; i < 3; ++i) test.push_back(Example{fv_of({{0, 1.0}}), true});   // tp
  test.push_back(Example{fv_of({{0, 1.0}}), false});                              // fp
  for (int i = 0; i < 2; ++i) test.push_back(Example{fv_of({{1, 1.0}}), true});   // fn
  for (int i = 0; i < 4; ++i) test.push_back(Example{fv_of({{1, 1.0}}), false});  // tn

  EvalReport r = evaluate(m, test);
  CHECK(r.tp == 3);
  CHECK(r.fp == 1);
  CHECK(r.fn == 2);
  CHECK(r.tn == 4);
  CHECK(r.precision == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(r.recall == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(r.f_score == doctest::Approx(2.0 * 0.75 * 0.6 / 1.35).epsilon(1e-15));
  CHECK(r.tp + r.fp + r.fn + r.tn == test.size());
}

TEST_CASE("evaluate degenerate cases") {
  LinearModel m;
  m.dims = 2;
  m.embed_dim = 0;
  m.weights = {0.0, 0.0};
  m.bias = -10.0;  // always predicts negative
  std::vector<Example> test{Example{fv_of({{0, 1.0}}), true},
                            Example{fv_of({{1, 1.0}}), false}};
  EvalReport r = evaluate(m, test);
  CHECK(r.recall == 0.0);
  CHECK(r.f_score == 0.0);

  m.bias = 10.0;  // always predicts positive; precision = share of positives
  EvalReport r2 = evaluate(m, test);
  CHECK(r2.recall == 1.0);
  CHECK(r2.precision == doctest::Approx(0.5));
}

TEST_CASE("threshold monotonicity") {
  std::mt19937_64 rng(606);
  LinearModel m;
  m.dims = 8;
  m.embed_dim = 0;
  m.weights.assign(8, 0.0);
  for (auto& w : m.weights) w = u01(rng) * 2.0 - 1.0;
  std::vector<Example> data;
  for (int i = 0; i < 50; ++i)
    data.push_back(Example{fv_of({{static_cast<std::uint32_t>(rng() % 8), u01(rng) * 3.0}}),
                           rng() % 2 == 0});
  size_t prev = data.size() + 1;
  for (double threshold : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    size_t positives = 0;
    for (const auto& ex : data)
      if (predict(m, ex.features) >= threshold) ++positives;
    CHECK(positives <= prev);
    prev = positives;
  }
}

TEST_CASE("two-stage classification partitions the corpus") {
  Corpus corpus;
  const char* texts[] = {"the weather is lovely today", "breast cancer screening saves lives",
                         "donate to the breast cancer charity drive",
                         "my mom fights breast cancer with hope", "totally unrelated chatter"};
  for (int i = 0; i < 5; ++i)
    corpus.posts.push_back(Post{"p" + std::to_string(i), i, texts[i], {}, {},
                                Source::search_archive});

  FeatureConfig fcfg;
  fcfg.dims = 1 << 12;
  auto featurize_text = [&](const std::string& t) {
    return featurize(normalize_for_classification(t), fcfg);
  };
  std::vector<Example> s1, s2;
  for (const auto& p : corpus.posts) {
    bool relevant = p.text.find("cancer") != std::string::npos;
    s1.push_back(Example{featurize_text(p.text), relevant});
    if (relevant)
      s2.push_back(Example{featurize_text(p.text),
                           p.text.find("donate") != std::string::npos ||
                               p.text.find("screening") != std::string::npos});
  }
  TrainConfig tcfg;
  tcfg.features = fcfg;
  tcfg.epochs = 150;
  tcfg.learning_rate = 0.5;
  tcfg.l2 = 0.0;
  tcfg.seed = 11;
  LinearModel stage1 = train(s1, Stage::relevance, tcfg);
  LinearModel stage2 = train(s2, Stage::audience, tcfg);

  auto labels = classify_two_stage(corpus, stage1, stage2, fcfg);
  CHECK(labels.size() == corpus.posts.size());
  size_t irrelevant = 0, promotional = 0, laypeople = 0;
  for (const auto& [id, label] : labels) {
    if (label == GroupLabel::irrelevant) ++irrelevant;
    else if (label == GroupLabel::promotional) ++promotional;
    else ++laypeople;
  }
  CHECK(irrelevant + promotional + laypeople == corpus.posts.size());

  // stage order is validated
  CHECK_THROWS_AS(classify_two_stage(corpus, stage2, stage1, fcfg), ValidationError);
}

TEST_CASE("model save/load round-trip is exact") {
  TempDir dir("model_io");
  LinearModel m;
  m.dims = 32;
  m.embed_dim = 2;
  m.stage = Stage::audience;
  m.weights.assign(34, 0.0);
  m.weights[3] = 0.12345678901234567;
  m.weights[31] = -7.5e-11;
  m.weights[33] = 2.0 / 3.0;
  m.bias = -0.987654321;
  m.meta = TrainingMeta{17, 0.05, 99, 1e-4, 8};
  std::string path = dir.file("m.model");
  save_model(m, path);
  LinearModel r = load_model(path);
  CHECK(r.dims == m.dims);
  CHECK(r.embed_dim == m.embed_dim);
  CHECK(r.stage == m.stage);
  CHECK(r.weights == m.weights);
  CHECK(r.bias == m.bias);
  CHECK(r.meta.epochs == m.meta.epochs);
  CHECK(r.meta.seed == m.meta.seed);

  CHECK_THROWS_AS(load_model(dir.file("missing.model")), ValidationError);
  std::string junk = dir.write("junk.model", "not a model\n");
  CHECK_THROWS_AS(load_model(junk), ValidationError);
}

TEST_CASE("annotation file parsing") {
  TempDir dir("annotations");
  std::string path =
      dir.write("ann.tsv", "p1\tirrelevant\np2\tpromotional\np3\tlaypeople\n");
  auto labels = load_annotations(path);
  CHECK(labels.size() == 3);
  CHECK(labels.at("p2") == GroupLabel::promotional);
  std::string bad = dir.write("bad.tsv", "p1\tsomething\n");
  CHECK_THROWS_AS(load_annotations(bad), ValidationError);
}

TEST_CASE("split_train_test is a deterministic 80/20 partition") {
  auto [train_idx, test_idx] = split_train_test(100, 5);
  CHECK(train_idx.size() == 80);
  CHECK(test_idx.size() == 20);
  std::set<size_t> all(train_idx.begin(), train_idx.end());
  all.insert(test_idx.begin(), test_idx.end());
  CHECK(all.size() == 100);
  auto [t2, e2] = split_train_test(100, 5);
  CHECK(train_idx == t2);
  CHECK(test_idx == e2);
  auto [t3, e3] = split_train_test(100, 6);
  CHECK(train_idx != t3);
}
