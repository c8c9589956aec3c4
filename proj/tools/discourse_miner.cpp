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

#include <chrono>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "miner/pipeline.hpp"
#include "miner/version.hpp"

namespace {

struct StageSpec {
  const char* name;
  const char* description;
  miner::StageCounts (*run)(const miner::RunConfig&);
};

constexpr StageSpec kStages[] = {
    {"ingest", "Load, deduplicate and language-filter the input corpus",
     miner::pipeline::cmd_ingest},
    {"suggest", "Propose new hashtag keywords from matched posts",
     miner::pipeline::cmd_suggest},
    {"classify-train", "Train and evaluate the two-stage classifier",
     miner::pipeline::cmd_classify_train},
    {"classify", "Label every post (irrelevant / promotional / laypeople)",
     miner::pipeline::cmd_classify},
    {"sentiment", "Score emotion categories with the lexicon",
     miner::pipeline::cmd_sentiment},
    {"geocode", "Resolve author locations to US states", miner::pipeline::cmd_geocode},
    {"trend", "Monthly emotion means and Mann-Kendall trend tests",
     miner::pipeline::cmd_trend},
    {"topics-fit", "Fit the biterm topic model on relevant posts",
     miner::pipeline::cmd_topics_fit},
    {"topics-infer", "Assign each relevant post its most likely topic",
     miner::pipeline::cmd_topics_infer},
    {"correlate", "Correlate monthly theme volumes between groups",
     miner::pipeline::cmd_correlate},
    {"pa-subset", "Extract and model the physical-activity subcorpus",
     miner::pipeline::cmd_pa_subset},
    {"report", "Assemble all report tables from stage outputs",
     miner::pipeline::cmd_report},
};

int run_stage(const StageSpec& stage, const std::string& config_path,
              const std::string& out_override, long long seed_override, bool has_seed) {
  miner::RunConfig cfg = miner::RunConfig::parse_file(config_path);
  if (!out_override.empty()) cfg.set_out_dir(out_override);
  if (has_seed) cfg.set_seed_override(static_cast<std::uint64_t>(seed_override));

  auto start = std::chrono::steady_clock::now();
  miner::StageCounts counts = stage.run(cfg);
  auto wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  miner::write_manifest(cfg, stage.name, counts, wall_ms);

  std::cout << stage.name << ": done in " << wall_ms << " ms";
  for (const auto& [key, value] : counts) std::cout << "  " << key << "=" << value;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discourse-miner: batch analytics over short-text corpora"};
  app.set_version_flag("--version", miner::kVersion);
  app.require_subcommand(1);

  struct Options {
    std::string config;
    std::string out;
    long long seed = 0;
    bool has_seed = false;
  };

  std::vector<std::pair<const StageSpec*, Options>> invocations;
  for (const StageSpec& stage : kStages) {
    CLI::App* sub = app.add_subcommand(stage.name, stage.description);
    auto opts = std::make_shared<Options>();
    sub->add_option("--config", opts->config, "Run configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts->out, "Output directory (overrides [output] dir)");
    sub->add_option("--seed", opts->seed, "Seed override for this stage");
    sub->callback([&invocations, &stage, opts, sub] {
      opts->has_seed = sub->count("--seed") > 0;
      invocations.emplace_back(&stage, *opts);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    for (const auto& [stage, opts] : invocations)
      if (int rc = run_stage(*stage, opts.config, opts.out, opts.seed, opts.has_seed)) return rc;
  } catch (const miner::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
