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
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "miner/error.hpp"
#include "miner/textprep.hpp"

namespace miner {

struct Vocab {
  std::vector<std::string> words;
  std::unordered_map<std::string, std::uint32_t> index;

  std::uint32_t add(const std::string& word) {
    auto it = index.find(word);
    if (it != index.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(words.size());
    words.push_back(word);
    index.emplace(word, id);
    return id;
  }

  std::optional<std::uint32_t> find(const std::string& word) const {
    auto it = index.find(word);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const { return words.size(); }
};

// Unordered word pair, stored canonically with w1 <= w2.
struct Biterm {
  std::uint32_t w1 = 0;
  std::uint32_t w2 = 0;
  auto operator<=>(const Biterm&) const = default;
};

inline Biterm make_biterm(std::uint32_t a, std::uint32_t b) {
  return a <= b ? Biterm{a, b} : Biterm{b, a};
}

// All unordered pairs within each sliding window; duplicates kept.
// Documents no longer than the window yield all C(n,2) pairs.
inline std::vector<Biterm> extract_biterms(const std::vector<std::uint32_t>& ids,
                                           std::size_t window) {
  if (window < 2) throw ValidationError("extract_biterms: window must be >= 2");
  std::vector<Biterm> out;
  for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
    std::size_t limit = std::min(ids.size(), i + window);
    for (std::size_t j = i + 1; j < limit; ++j) out.push_back(make_biterm(ids[i], ids[j]));
  }
  return out;
}

inline constexpr std::size_t kWholeDocumentWindow = static_cast<std::size_t>(-1);

struct BtmModel {
  std::uint32_t k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  Vocab vocab;
  std::vector<std::int64_t> topic_biterms;     // n_z, length K
  std::vector<std::int64_t> topic_word_count;  // n_wz, K x V row-major
  std::vector<double> phi;                     // K x V row-major
  std::vector<double> theta;                   // length K

  double phi_at(std::uint32_t z, std::uint32_t w) const { return phi[size_t(z) * vocab.size() + w]; }
};

inline double default_btm_alpha(std::uint32_t k) { return 50.0 / static_cast<double>(k); }
inline constexpr double kDefaultBtmBeta = 0.01;

// Called after every Gibbs sweep with (sweep index, n_z, n_wz).
using SweepObserver =
    std::function<void(std::size_t, const std::vector<std::int64_t>&,
                       const std::vector<std::int64_t>&)>;

namespace detail {

inline double next_u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline void check_count_tables(const std::vector<std::int64_t>& n_z,
                               const std::vector<std::int64_t>& n_wz, std::size_t v,
                               std::int64_t total_biterms) {
  std::int64_t sum_z = 0;
  for (size_t z = 0; z < n_z.size(); ++z) {
    if (n_z[z] < 0) throw std::logic_error("btm: negative topic count");
    sum_z += n_z[z];
    std::int64_t sum_w = 0;
    for (size_t w = 0; w < v; ++w) {
      std::int64_t c = n_wz[z * v + w];
      if (c < 0) throw std::logic_error("btm: negative word count");
      sum_w += c;
    }
    if (sum_w != 2 * n_z[z]) throw std::logic_error("btm: word counts out of sync");
  }
  if (sum_z != total_biterms) throw std::logic_error("btm: topic counts out of sync");
}

}  // namespace detail

// Collapsed Gibbs sampling over the corpus-wide biterm multiset. Each biterm
// carries one topic assignment, resampled per sweep with its own counts
// removed:
//   p(z) ~ (n_z + alpha) (n_w1|z + beta)(n_w2|z + beta)
//          / ((2 n_z + V beta)(2 n_z + 1 + V beta))
// The biterm list is canonicalized (sorted) first, so permuting the corpus
// order does not change the result for a fixed seed.
inline BtmModel fit_btm(std::vector<Biterm> biterms, Vocab vocab, std::uint32_t k, double alpha,
                        double beta, std::size_t iterations, std::uint64_t seed,
                        const SweepObserver& observer = {}) {
  if (k < 1) throw ValidationError("fit_btm: K must be >= 1");
  if (iterations < 1) throw ValidationError("fit_btm: iterations must be >= 1");
  if (biterms.empty()) throw ValidationError("fit_btm: empty biterm multiset");
  const std::size_t v = vocab.size();
  for (const Biterm& b : biterms)
    if (b.w2 >= v) throw ValidationError("fit_btm: biterm word id out of vocabulary");

  std::sort(biterms.begin(), biterms.end());
  const std::size_t n_biterms = biterms.size();

  BtmModel model;
  model.k = k;
  model.alpha = alpha;
  model.beta = beta;
  model.seed = seed;
  model.iterations = iterations;
  model.vocab = std::move(vocab);
  model.topic_biterms.assign(k, 0);
  model.topic_word_count.assign(static_cast<size_t>(k) * v, 0);

  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> assignment(n_biterms);
  auto add = [&](std::size_t i, std::uint32_t z) {
    assignment[i] = z;
    ++model.topic_biterms[z];
    ++model.topic_word_count[size_t(z) * v + biterms[i].w1];
    ++model.topic_word_count[size_t(z) * v + biterms[i].w2];
  };
  auto remove = [&](std::size_t i) {
    std::uint32_t z = assignment[i];
    --model.topic_biterms[z];
    --model.topic_word_count[size_t(z) * v + biterms[i].w1];
    --model.topic_word_count[size_t(z) * v + biterms[i].w2];
  };

  for (std::size_t i = 0; i < n_biterms; ++i)
    add(i, static_cast<std::uint32_t>(rng() % k));

  const double v_beta = static_cast<double>(v) * beta;
  std::vector<double> prob(k);
  for (std::size_t sweep = 0; sweep < iterations; ++sweep) {
    for (std::size_t i = 0; i < n_biterms; ++i) {
      remove(i);
      const std::uint32_t w1 = biterms[i].w1, w2 = biterms[i].w2;
      double total = 0.0;
      for (std::uint32_t z = 0; z < k; ++z) {
        double nz = static_cast<double>(model.topic_biterms[z]);
        double nw1 = static_cast<double>(model.topic_word_count[size_t(z) * v + w1]);
        double nw2 = static_cast<double>(model.topic_word_count[size_t(z) * v + w2]);
        double p = (nz + alpha) * (nw1 + beta) * (nw2 + beta) /
                   ((2.0 * nz + v_beta) * (2.0 * nz + 1.0 + v_beta));
        prob[z] = p;
        total += p;
      }
      double u = detail::next_u01(rng) * total;
      std::uint32_t z_new = k - 1;
      double cum = 0.0;
      for (std::uint32_t z = 0; z < k; ++z) {
        cum += prob[z];
        if (u < cum) {
          z_new = z;
          break;
        }
      }
      add(i, z_new);
    }
    detail::check_count_tables(model.topic_biterms, model.topic_word_count, v,
                               static_cast<std::int64_t>(n_biterms));
    if (observer) observer(sweep, model.topic_biterms, model.topic_word_count);
  }

  model.phi.assign(static_cast<size_t>(k) * v, 0.0);
  model.theta.assign(k, 0.0);
  double b_total = static_cast<double>(n_biterms);
  for (std::uint32_t z = 0; z < k; ++z) {
    double nz = static_cast<double>(model.topic_biterms[z]);
    for (std::size_t w = 0; w < v; ++w)
      model.phi[size_t(z) * v + w] =
          (static_cast<double>(model.topic_word_count[size_t(z) * v + w]) + beta) /
          (2.0 * nz + v_beta);
    model.theta[z] = (nz + alpha) / (b_total + static_cast<double>(k) * alpha);
  }
  return model;
}

struct TopicAssignment {
  std::string post_id;
  std::vector<double> distribution;  // length K, sums to 1
  std::uint32_t argmax_topic = 0;    // lowest index on ties
  bool no_biterms = false;           // document fell back to theta
};

// P(z|d) = sum_b P(z|b) P(b|d), with P(z|b) ~ theta_z phi_z,w1 phi_z,w2 and
// P(b|d) the empirical biterm frequency. Unknown tokens are dropped; a
// document with no biterms receives theta and is flagged.
inline TopicAssignment infer_topics(const BtmModel& model, const TokenStream& tokens,
                                    std::size_t window = kWholeDocumentWindow,
                                    bool theta_fallback = true) {
  std::vector<std::uint32_t> ids;
  for (const auto& t : tokens.tokens)
    if (auto id = model.vocab.find(t)) ids.push_back(*id);
  std::vector<Biterm> biterms =
      extract_biterms(ids, window == kWholeDocumentWindow
                               ? std::max<std::size_t>(2, ids.size())
                               : window);
  TopicAssignment out;
  out.distribution.assign(model.k, 0.0);
  if (biterms.empty()) {
    if (!theta_fallback)
      throw ValidationError("infer_topics: document yields no biterms");
    out.no_biterms = true;
    out.distribution = model.theta;
  } else {
    const double inv_b = 1.0 / static_cast<double>(biterms.size());
    std::vector<double> pzb(model.k);
    for (const Biterm& b : biterms) {
      double total = 0.0;
      for (std::uint32_t z = 0; z < model.k; ++z) {
        pzb[z] = model.theta[z] * model.phi_at(z, b.w1) * model.phi_at(z, b.w2);
        total += pzb[z];
      }
      if (total <= 0.0) continue;
      for (std::uint32_t z = 0; z < model.k; ++z) out.distribution[z] += pzb[z] / total * inv_b;
    }
    double sum = std::accumulate(out.distribution.begin(), out.distribution.end(), 0.0);
    if (sum > 0.0)
      for (double& p : out.distribution) p /= sum;
  }
  out.argmax_topic = 0;
  for (std::uint32_t z = 1; z < model.k; ++z)
    if (out.distribution[z] > out.distribution[out.argmax_topic]) out.argmax_topic = z;
  return out;
}

// Top-k words of a topic by phi weight; ties break toward the lower word
// index. Suitable for wordcloud export.
inline std::vector<std::pair<std::string, double>> top_words(const BtmModel& model,
                                                             std::uint32_t topic, std::size_t k) {
  if (topic >= model.k) throw ValidationError("top_words: topic index out of range");
  const std::size_t v = model.vocab.size();
  if (k < 1 || k > v) throw ValidationError("top_words: k out of range");
  std::vector<std::uint32_t> order(v);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    double pa = model.phi_at(topic, a), pb = model.phi_at(topic, b);
    if (pa != pb) return pa > pb;
    return a < b;
  });
  std::vector<std::pair<std::string, double>> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    out.emplace_back(model.vocab.words[order[i]], model.phi_at(topic, order[i]));
  return out;
}

// Merge map: raw topic index -> human-assigned theme label, total on [0, K).
using TopicMergeMap = std::vector<std::string>;

inline TopicMergeMap load_merge_map(const std::string& path, std::uint32_t k) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open merge map file " + path);
  TopicMergeMap map(k);
  std::vector<bool> seen(k, false);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": expected \"topic_index<TAB>theme_label\"");
    unsigned long idx = 0;
    try {
      idx = std::stoul(line.substr(0, tab));
    } catch (...) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": bad topic index");
    }
    std::string label = line.substr(tab + 1);
    if (idx >= k)
      throw ValidationError(path + ":" + std::to_string(lineno) + ": topic index out of range");
    if (label.empty())
      throw ValidationError(path + ":" + std::to_string(lineno) + ": empty theme label");
    map[idx] = label;
    seen[idx] = true;
  }
  for (std::uint32_t z = 0; z < k; ++z)
    if (!seen[z])
      throw ValidationError(path + ": merge map does not cover topic " + std::to_string(z));
  return map;
}

struct ThemeRow {
  std::string group;
  std::string theme;
  std::size_t count = 0;
  double proportion = 0.0;
};

// Folds argmax topics through the merge map and tabulates per-group counts
// and proportions (proportions sum to 1 within each group).
inline std::vector<ThemeRow> apply_merge(const std::vector<TopicAssignment>& assignments,
                                         const std::map<std::string, std::string>& groups,
                                         const TopicMergeMap& merge) {
  std::map<std::string, std::map<std::string, std::size_t>> counts;
  std::map<std::string, std::size_t> totals;
  for (const TopicAssignment& a : assignments) {
    auto git = groups.find(a.post_id);
    if (git == groups.end())
      throw ValidationError("apply_merge: no group for post " + a.post_id);
    if (a.argmax_topic >= merge.size())
      throw ValidationError("apply_merge: topic index " + std::to_string(a.argmax_topic) +
                            " not covered by merge map");
    ++counts[git->second][merge[a.argmax_topic]];
    ++totals[git->second];
  }
  std::vector<ThemeRow> out;
  for (const auto& [group, themes] : counts)
    for (const auto& [theme, count] : themes)
      out.push_back(ThemeRow{group, theme, count,
                             static_cast<double>(count) / static_cast<double>(totals[group])});
  return out;
}

inline void save_btm(const BtmModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  out << "discourse-btm-model 1\n";
  out << "k " << model.k << '\n';
  out << "alpha " << num(model.alpha) << '\n';
  out << "beta " << num(model.beta) << '\n';
  out << "seed " << model.seed << '\n';
  out << "iterations " << model.iterations << '\n';
  out << "vocab " << model.vocab.size() << '\n';
  for (const auto& w : model.vocab.words) out << w << '\n';
  out << "n_z";
  for (auto c : model.topic_biterms) out << ' ' << c;
  out << '\n';
  out << "n_wz\n";
  for (std::uint32_t z = 0; z < model.k; ++z) {
    for (std::size_t w = 0; w < model.vocab.size(); ++w) {
      if (w) out << ' ';
      out << model.topic_word_count[size_t(z) * model.vocab.size() + w];
    }
    out << '\n';
  }
  out << "theta";
  for (double t : model.theta) out << ' ' << num(t);
  out << '\n';
  out << "phi\n";
  for (std::uint32_t z = 0; z < model.k; ++z) {
    for (std::size_t w = 0; w < model.vocab.size(); ++w) {
      if (w) out << ' ';
      out << num(model.phi[size_t(z) * model.vocab.size() + w]);
    }
    out << '\n';
  }
}

inline BtmModel load_btm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file " + path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "discourse-btm-model" || version != 1)
    throw ValidationError(path + ": not a discourse-btm-model v1 file");
  BtmModel model;
  std::string key;
  std::size_t v = 0;
  while (in >> key) {
    if (key == "k") in >> model.k;
    else if (key == "alpha") in >> model.alpha;
    else if (key == "beta") in >> model.beta;
    else if (key == "seed") in >> model.seed;
    else if (key == "iterations") in >> model.iterations;
    else if (key == "vocab") {
      in >> v;
      for (std::size_t i = 0; i < v; ++i) {
        std::string w;
        if (!(in >> w)) throw ValidationError(path + ": truncated vocabulary");
        model.vocab.add(w);
      }
    } else if (key == "n_z") {
      model.topic_biterms.assign(model.k, 0);
      for (auto& c : model.topic_biterms)
        if (!(in >> c)) throw ValidationError(path + ": truncated n_z");
    } else if (key == "n_wz") {
      model.topic_word_count.assign(static_cast<size_t>(model.k) * v, 0);
      for (auto& c : model.topic_word_count)
        if (!(in >> c)) throw ValidationError(path + ": truncated n_wz");
    } else if (key == "theta") {
      model.theta.assign(model.k, 0.0);
      for (auto& t : model.theta)
        if (!(in >> t)) throw ValidationError(path + ": truncated theta");
    } else if (key == "phi") {
      model.phi.assign(static_cast<size_t>(model.k) * v, 0.0);
      for (auto& p : model.phi)
        if (!(in >> p)) throw ValidationError(path + ": truncated phi");
    } else {
      throw ValidationError(path + ": unknown field \"" + key + "\"");
    }
  }
  if (model.k == 0 || v == 0) throw ValidationError(path + ": incomplete model");
  if (model.phi.size() != static_cast<size_t>(model.k) * v ||
      model.theta.size() != model.k)
    throw ValidationError(path + ": inconsistent model tables");
  return model;
}

}  // namespace miner
