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

// End-to-end detection: filter transfers, find weakly connected components
// on the merged cross-chain graph, cluster activity sequences inside each
// component, and confirm clusters with transfer patterns searched on the
// per-chain graphs.

#ifndef SYBILSCOPE_PIPELINE_HPP_
#define SYBILSCOPE_PIPELINE_HPP_

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sybilscope/activity.hpp"
#include "sybilscope/cluster.hpp"
#include "sybilscope/ingest.hpp"
#include "sybilscope/patterns.hpp"
#include "sybilscope/txgraph.hpp"

namespace sybil {

inline constexpr const char* kReportSchema = "sybil-report/1";
inline constexpr const char* kTruthSchema = "sybil-truth/1";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Snapshot {
  std::map<std::string, std::vector<Transaction>> transactions;  // by chain
  std::vector<DappEvent> events;
  FilterConfig filters;
  // When set, only these accounts are clustered.
  std::optional<std::set<AccountId>> eligible;

  // Content hash over the canonical serialization of every record.
  std::string id() const;
};

struct DetectConfig {
  // Chains whose graphs are searched for patterns; empty means all.
  std::vector<std::string> chains;
  // Unset: the single search chain's published default, else ClusterParams{}.
  std::optional<ClusterParams> cluster;
  MatchMode match;
  SubgraphCaps caps;
  size_t min_component_size = 4;
  bool sequential = true;
  bool radial = true;
  bool complex = true;
  size_t jobs = 1;  // not part of the config hash

  nlohmann::json to_json() const;
  // Missing keys keep their defaults. Throws ConfigError.
  static DetectConfig from_json(const nlohmann::json& j);
  std::string hash() const;
};

struct ClusterReport {
  std::vector<AccountId> accounts;
  double mean_similarity = 1.0;
  std::vector<SequentialPattern> sequential;
  std::vector<RadialPattern> radial;
  std::vector<ComplexPattern> complex;
  bool flagged = false;
};

struct ComponentReport {
  size_t id = 0;            // index among all components, by smallest member
  size_t vertex_count = 0;
  size_t account_count = 0; // accounts that took part in clustering
  ClusterParams params;
  std::vector<ClusterReport> clusters;
  std::vector<AccountId> noise;
};

struct DetectionReport {
  std::string snapshot_id;
  std::string config_hash;
  std::string generated_at;  // UTC, the only wall-clock field
  size_t total_components = 0;
  std::vector<ComponentReport> components;  // processed components only
  std::set<AccountId> flagged_accounts;
};

// Throws ConfigError when the config names a chain the snapshot lacks.
DetectionReport detect(const Snapshot& snapshot, const DetectConfig& config);

nlohmann::ordered_json report_to_json(const DetectionReport& report);
// Throws std::invalid_argument on a schema mismatch.
DetectionReport report_from_json(const nlohmann::json& j);

struct GroundTruth {
  std::string snapshot_id;
  std::map<AccountId, std::string> bot_of;           // account -> bot id
  std::map<std::string, std::string> pattern_of_bot; // bot id -> radial|sequential|complex

  nlohmann::ordered_json to_json() const;
  static GroundTruth from_json(const nlohmann::json& j);
};

struct Metrics {
  // Absent when the ratio is 0/0.
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::map<std::string, std::optional<double>> pattern_recall;
  size_t flagged = 0;
  size_t true_positives = 0;
  size_t bot_accounts = 0;

  nlohmann::ordered_json to_json() const;
};

// Account-level precision/recall. A bot counts as recovered for its
// pattern type when at least half of its accounts sit together in one
// flagged cluster.
Metrics evaluate(const DetectionReport& report, const GroundTruth& truth);

}  // namespace sybil

#endif  // SYBILSCOPE_PIPELINE_HPP_
