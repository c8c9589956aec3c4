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

#include <cstdint>
#include <fstream>
#include <map>
#include <string>

#include "json.hpp"
#include "miner/config.hpp"
#include "miner/version.hpp"

namespace miner {

using StageCounts = std::map<std::string, std::int64_t>;

// One manifest per stage: config snapshot, stage counts, wall clock. The
// wall-clock field is the only part expected to differ between reruns.
inline void write_manifest(const RunConfig& cfg, const std::string& stage,
                           const StageCounts& counts, std::int64_t wall_clock_ms) {
  nlohmann::json snapshot;
  for (const auto& [section, kv] : cfg.sections())
    for (const auto& [key, value] : kv) snapshot[section + "." + key] = value;
  nlohmann::json j{{"tool_version", kVersion},
                   {"stage", stage},
                   {"config", snapshot},
                   {"counts", counts},
                   {"wall_clock_ms", wall_clock_ms}};
  std::string file_stem = stage;
  for (char& c : file_stem)
    if (c == '-') c = '_';
  std::string path = cfg.out_dir() + "/manifest_" + file_stem + ".json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << j.dump(2) << '\n';
}

}  // namespace miner
