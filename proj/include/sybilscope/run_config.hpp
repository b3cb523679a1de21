// Copyright 2026 The sybilscope Authors
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

// Run configuration file and snapshot loading.
//
// The config is one JSON document:
//
//   {
//     "snapshot": {
//       "transactions": {"<chain>": "tx_<chain>.jsonl", ...},
//       "events": "events.jsonl",
//       "contracts": "contracts.txt",     (optional)
//       "exchanges": "exchanges.txt",     (optional)
//       "whitelist": "whitelist.txt",     (optional)
//       "eligible": "eligible.txt"        (optional)
//     },
//     "detect": { ... DetectConfig keys ... },
//     "output": {"report": "report.json", "dot_dir": "dot"}
//   }
//
// Relative paths resolve against the directory holding the config file.

#ifndef SYBILSCOPE_RUN_CONFIG_HPP_
#define SYBILSCOPE_RUN_CONFIG_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sybilscope/pipeline.hpp"

namespace sybil {

struct SnapshotSources {
  std::map<std::string, std::filesystem::path> transactions;  // by chain
  std::optional<std::filesystem::path> events;
  std::optional<std::filesystem::path> contracts;
  std::optional<std::filesystem::path> exchanges;
  std::optional<std::filesystem::path> whitelist;
  std::optional<std::filesystem::path> eligible;
};

struct OutputPaths {
  std::optional<std::filesystem::path> report;
  std::optional<std::filesystem::path> dot_dir;
};

struct RunConfig {
  SnapshotSources sources;
  DetectConfig detect;
  OutputPaths output;
};

// Throws IoError if the file cannot be read, ConfigError if it does not
// parse or has the wrong shape.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir);

struct LoadedSnapshot {
  Snapshot snapshot;
  std::vector<std::string> diagnostics;  // "<file>:<line>: <reason>"
};

// Throws IoError when a referenced file is missing or unreadable.
LoadedSnapshot load_snapshot(const SnapshotSources& sources);

}  // namespace sybil

#endif  // SYBILSCOPE_RUN_CONFIG_HPP_
