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
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "miner/corpus.hpp"
#include "miner/csv.hpp"
#include "miner/error.hpp"
#include "miner/textprep.hpp"

namespace miner {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

struct FeatureConfig {
  std::uint32_t dims = 1u << 18;  // power of two
  bool bigrams = true;
};

struct EmbeddingTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;
};

// Embedding file: "word v1 v2 ... vE" per line, one dimension for the table.
inline EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open embedding file " + path);
  EmbeddingTable table;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    std::vector<double> vec;
    double v;
    while (ss >> v) vec.push_back(v);
    if (word.empty() || vec.empty())
      throw ValidationError(path + ":" + std::to_string(lineno) + ": bad embedding line");
    if (table.dim == 0) table.dim = vec.size();
    if (vec.size() != table.dim)
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": inconsistent embedding dimension");
    table.vectors.emplace(std::move(word), std::move(vec));
  }
  if (table.vectors.empty()) throw ValidationError("embedding file " + path + " is empty");
  return table;
}

struct FeatureVector {
  std::vector<std::uint32_t> indices;  // strictly increasing
  std::vector<double> values;
  std::vector<double> dense;  // embedding average block, empty or length E
};

// Hashed unigram+bigram counts; the dense block is the mean of the found
// token embeddings (all zeros when nothing is found).
inline FeatureVector featurize(const TokenStream& tokens, const FeatureConfig& config,
                               const EmbeddingTable* embeddings = nullptr) {
  std::map<std::uint32_t, double> counts;
  const auto& toks = tokens.tokens;
  for (const auto& t : toks)
    counts[static_cast<std::uint32_t>(fnv1a64(t) % config.dims)] += 1.0;
  if (config.bigrams) {
    for (size_t i = 0; i + 1 < toks.size(); ++i) {
      std::string bigram = toks[i] + " " + toks[i + 1];
      counts[static_cast<std::uint32_t>(fnv1a64(bigram) % config.dims)] += 1.0;
    }
  }
  FeatureVector fv;
  fv.indices.reserve(counts.size());
  fv.values.reserve(counts.size());
  for (const auto& [idx, val] : counts) {
    fv.indices.push_back(idx);
    fv.values.push_back(val);
  }
  if (embeddings) {
    fv.dense.assign(embeddings->dim, 0.0);
    size_t found = 0;
    for (const auto& t : toks) {
      auto it = embeddings->vectors.find(t);
      if (it == embeddings->vectors.end()) continue;
      ++found;
      for (size_t k = 0; k < embeddings->dim; ++k) fv.dense[k] += it->second[k];
    }
    if (found > 0)
      for (double& v : fv.dense) v /= static_cast<double>(found);
  }
  return fv;
}

enum class Stage { relevance, audience };

inline const char* to_string(Stage s) { return s == Stage::relevance ? "relevance" : "audience"; }

inline std::optional<Stage> parse_stage(std::string_view s) {
  if (s == "relevance") return Stage::relevance;
  if (s == "audience") return Stage::audience;
  return std::nullopt;
}

struct TrainingMeta {
  std::size_t epochs = 0;
  double learning_rate = 0.0;
  std::uint64_t seed = 0;
  double l2 = 0.0;
  std::size_t batch_size = 0;
};

struct LinearModel {
  std::uint32_t dims = 0;       // hashed block size D
  std::uint32_t embed_dim = 0;  // dense block size E (0 if unused)
  Stage stage = Stage::relevance;
  std::vector<double> weights;  // length dims + embed_dim
  double bias = 0.0;
  TrainingMeta meta;
};

struct Example {
  FeatureVector features;
  bool label = false;  // positive class
};

namespace detail {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double raw_score(const LinearModel& m, const FeatureVector& fv) {
  if (fv.dense.size() != m.embed_dim)
    throw ValidationError("predict: dense block size does not match model");
  double z = m.bias;
  for (size_t i = 0; i < fv.indices.size(); ++i) {
    if (fv.indices[i] >= m.dims) throw ValidationError("predict: feature index out of range");
    z += m.weights[fv.indices[i]] * fv.values[i];
  }
  for (size_t k = 0; k < fv.dense.size(); ++k) z += m.weights[m.dims + k] * fv.dense[k];
  return z;
}

// log(1 + e^-|z|) formulated to avoid overflow
inline double log_loss(double z, bool label) {
  double y = label ? 1.0 : 0.0;
  return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

}  // namespace detail

struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad_weights;
  double grad_bias = 0.0;
};

// Mean L2-regularized log-loss over the batch and its exact gradient
// (bias unregularized). Shared by the trainer and the gradient checks.
// The dense block occupies weights[dims .. dims + E).
inline LossGradient loss_and_gradient(std::span<const Example> batch,
                                      std::span<const double> weights, double bias, double l2,
                                      std::uint32_t dims) {
  LossGradient out;
  out.grad_weights.assign(weights.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const Example& ex : batch) {
    double z = bias;
    for (size_t i = 0; i < ex.features.indices.size(); ++i)
      z += weights[ex.features.indices[i]] * ex.features.values[i];
    for (size_t k = 0; k < ex.features.dense.size(); ++k)
      z += weights[dims + k] * ex.features.dense[k];
    out.loss += detail::log_loss(z, ex.label) * inv_n;
    double residual = (detail::sigmoid(z) - (ex.label ? 1.0 : 0.0)) * inv_n;
    for (size_t i = 0; i < ex.features.indices.size(); ++i)
      out.grad_weights[ex.features.indices[i]] += residual * ex.features.values[i];
    for (size_t k = 0; k < ex.features.dense.size(); ++k)
      out.grad_weights[dims + k] += residual * ex.features.dense[k];
    out.grad_bias += residual;
  }
  double sq = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    sq += weights[i] * weights[i];
    out.grad_weights[i] += l2 * weights[i];
  }
  out.loss += 0.5 * l2 * sq;
  return out;
}

struct TrainConfig {
  FeatureConfig features;
  std::uint32_t embed_dim = 0;
  std::size_t epochs = 50;
  double learning_rate = 0.1;
  double l2 = 1e-4;
  std::size_t batch_size = 32;
  std::uint64_t seed = 1;
};

// Mini-batch SGD on L2-regularized logistic loss; the per-epoch shuffle is
// seeded, so fixed seed + data means bit-identical weights.
inline LinearModel train(const std::vector<Example>& examples, Stage stage,
                         const TrainConfig& config) {
  if (examples.size() < 2) throw ValidationError("train: need at least 2 examples");
  bool has_pos = false, has_neg = false;
  for (const Example& ex : examples) (ex.label ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw ValidationError("train: degenerate labels");
  for (const Example& ex : examples) {
    if (!ex.features.indices.empty() && ex.features.indices.back() >= config.features.dims)
      throw ValidationError("train: feature index out of range");
    if (ex.features.dense.size() != config.embed_dim)
      throw ValidationError("train: dense block size does not match config");
  }

  LinearModel model;
  model.dims = config.features.dims;
  model.embed_dim = config.embed_dim;
  model.stage = stage;
  model.weights.assign(static_cast<size_t>(model.dims) + model.embed_dim, 0.0);
  model.meta = TrainingMeta{config.epochs, config.learning_rate, config.seed, config.l2,
                            config.batch_size};

  std::mt19937_64 rng(config.seed);
  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  const size_t batch = std::max<size_t>(1, config.batch_size);
  std::vector<Example> scratch;
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with the shared engine keeps the visit order reproducible.
    for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    for (size_t start = 0; start < order.size(); start += batch) {
      size_t end = std::min(order.size(), start + batch);
      scratch.clear();
      for (size_t i = start; i < end; ++i) scratch.push_back(examples[order[i]]);
      LossGradient g =
          loss_and_gradient(scratch, model.weights, model.bias, config.l2, model.dims);
      for (size_t i = 0; i < model.weights.size(); ++i)
        model.weights[i] -= config.learning_rate * g.grad_weights[i];
      model.bias -= config.learning_rate * g.grad_bias;
    }
  }
  return model;
}

inline double predict(const LinearModel& model, const FeatureVector& fv) {
  return detail::sigmoid(detail::raw_score(model, fv));
}

inline constexpr double kDecisionThreshold = 0.5;

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::uint64_t split_seed = 0;
};

inline EvalReport evaluate(const LinearModel& model, const std::vector<Example>& test,
                           double threshold = kDecisionThreshold) {
  if (test.empty()) throw ValidationError("evaluate: empty test set");
  EvalReport r;
  for (const Example& ex : test) {
    bool predicted = predict(model, ex.features) >= threshold;
    if (predicted && ex.label) ++r.tp;
    else if (predicted && !ex.label) ++r.fp;
    else if (!predicted && ex.label) ++r.fn;
    else ++r.tn;
  }
  r.precision = (r.tp + r.fp) > 0 ? static_cast<double>(r.tp) / (r.tp + r.fp) : 0.0;
  r.recall = (r.tp + r.fn) > 0 ? static_cast<double>(r.tp) / (r.tp + r.fn) : 0.0;
  r.f_score = (r.precision + r.recall) > 0.0
                  ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
                  : 0.0;
  return r;
}

// Deterministic 80/20 split: seeded shuffle, first 80% train.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_train_test(
    std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  std::size_t n_train = n * 8 / 10;
  return {std::vector<std::size_t>(order.begin(), order.begin() + n_train),
          std::vector<std::size_t>(order.begin() + n_train, order.end())};
}

// Stage 1 splits irrelevant from relevant; stage 2 splits the relevant
// posts into promotional vs laypeople. Labels partition the corpus.
inline std::map<std::string, GroupLabel> classify_two_stage(const Corpus& corpus,
                                                            const LinearModel& stage1,
                                                            const LinearModel& stage2,
                                                            const FeatureConfig& config,
                                                            const EmbeddingTable* embeddings =
                                                                nullptr) {
  if (stage1.stage != Stage::relevance)
    throw ValidationError("classify_two_stage: stage1 model is not a relevance model");
  if (stage2.stage != Stage::audience)
    throw ValidationError("classify_two_stage: stage2 model is not an audience model");
  std::map<std::string, GroupLabel> labels;
  for (const Post& p : corpus.posts) {
    FeatureVector fv = featurize(normalize_for_classification(p.text), config, embeddings);
    if (predict(stage1, fv) < kDecisionThreshold) {
      labels[p.id] = GroupLabel::irrelevant;
    } else {
      labels[p.id] = predict(stage2, fv) >= kDecisionThreshold ? GroupLabel::promotional
                                                               : GroupLabel::laypeople;
    }
  }
  return labels;
}

// Annotation file: "id<TAB>label" per line.
inline std::map<std::string, GroupLabel> load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open annotation file " + path);
  std::map<std::string, GroupLabel> labels;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected \"id<TAB>label\"");
    auto label = parse_group_label(line.substr(tab + 1));
    if (!label)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": unknown label \"" +
                            line.substr(tab + 1) + "\"");
    labels[line.substr(0, tab)] = *label;
  }
  if (labels.empty()) throw ValidationError("annotation file " + path + " is empty");
  return labels;
}

inline void save_model(const LinearModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << "discourse-linear-model 1\n";
  out << "stage " << to_string(model.stage) << '\n';
  out << "dims " << model.dims << ' ' << model.embed_dim << '\n';
  out << "bias " << fmt_double(model.bias, 17) << '\n';
  out << "meta " << model.meta.epochs << ' ' << fmt_double(model.meta.learning_rate, 17) << ' '
      << model.meta.seed << ' ' << fmt_double(model.meta.l2, 17) << ' ' << model.meta.batch_size
      << '\n';
  size_t nnz = 0;
  for (double w : model.weights)
    if (w != 0.0) ++nnz;
  out << "nnz " << nnz << '\n';
  for (size_t i = 0; i < model.weights.size(); ++i)
    if (model.weights[i] != 0.0) out << i << ' ' << fmt_double(model.weights[i], 17) << '\n';
}

inline LinearModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file " + path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "discourse-linear-model" || version != 1)
    throw ValidationError(path + ": not a discourse-linear-model v1 file");
  LinearModel model;
  std::string key;
  while (in >> key) {
    if (key == "stage") {
      std::string s;
      in >> s;
      auto stage = parse_stage(s);
      if (!stage) throw ValidationError(path + ": unknown stage \"" + s + "\"");
      model.stage = *stage;
    } else if (key == "dims") {
      in >> model.dims >> model.embed_dim;
      model.weights.assign(static_cast<size_t>(model.dims) + model.embed_dim, 0.0);
    } else if (key == "bias") {
      in >> model.bias;
    } else if (key == "meta") {
      in >> model.meta.epochs >> model.meta.learning_rate >> model.meta.seed >> model.meta.l2 >>
          model.meta.batch_size;
    } else if (key == "nnz") {
      size_t nnz = 0;
      in >> nnz;
      if (model.weights.empty()) throw ValidationError(path + ": weights before dims");
      for (size_t k = 0; k < nnz; ++k) {
        size_t idx;
        double w;
        if (!(in >> idx >> w) || idx >= model.weights.size())
          throw ValidationError(path + ": bad weight entry");
        model.weights[idx] = w;
      }
    } else {
      throw ValidationError(path + ": unknown field \"" + key + "\"");
    }
  }
  if (model.dims == 0) throw ValidationError(path + ": missing dims");
  return model;
}

}  // namespace miner
