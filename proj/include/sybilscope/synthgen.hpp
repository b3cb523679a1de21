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

// Seeded generator of labeled snapshots with planted Sybil operators.
//
// Radial bots fund every account straight from a treasury, sequential bots
// pass funds down a chain of accounts, and complex bots combine the two in
// either order. All accounts of one bot replay the bot's activity template
// with random noise activities and jittered amounts. Ordinary users draw
// templates from a small shared pool (the "same tutorial" confound), are
// funded by fresh sources or exchange hot wallets, and pay a shared pool of
// merchants, so no transfer pattern links them.

#ifndef SYBILSCOPE_SYNTHGEN_HPP_
#define SYBILSCOPE_SYNTHGEN_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "sybilscope/pipeline.hpp"

namespace sybil {

struct ScenarioConfig {
  uint64_t seed = 1;
  std::vector<std::string> chains = {"arbitrum", "optimism"};

  size_t n_radial_bots = 0;
  size_t n_sequential_bots = 0;
  size_t n_complex_bots = 0;
  size_t accounts_per_bot = 8;
  // Per-type overrides; 0 falls back to accounts_per_bot.
  size_t radial_accounts = 0;
  size_t sequential_accounts = 0;
  size_t complex_accounts = 0;
  size_t n_ordinary_users = 0;

  size_t min_template_length = 4;
  size_t max_template_length = 8;
  double noise_probability = 0.1;
  double amount_jitter = 0.01;
  size_t template_pool_size = 10;
  double return_probability = 0.5;

  size_t merchant_pool_size = 25;
  size_t n_exchanges = 2;
  double exchange_funded_fraction = 0.3;

  int64_t start_time = 1640995200;  // 2022-01-01T00:00:00Z

  // Throws std::invalid_argument.
  void validate() const;
  nlohmann::ordered_json to_json() const;
  // Rejects negative counts and out-of-range probabilities with
  // std::invalid_argument.
  static ScenarioConfig from_json(const nlohmann::json& j);
};

struct Scenario {
  Snapshot snapshot;
  GroundTruth truth;
  // Planted structure for verification: bot id -> (treasury, accounts in
  // funding order).
  std::map<std::string, std::pair<AccountId, std::vector<AccountId>>> bots;
};

Scenario generate(const ScenarioConfig& cfg);

// Writes tx_<chain>.jsonl, events.jsonl, contracts.txt, exchanges.txt,
// whitelist.txt, truth.json and a ready-to-run detect config.json.
void write_scenario(const Scenario& scenario, const std::filesystem::path& dir);

}  // namespace sybil

#endif  // SYBILSCOPE_SYNTHGEN_HPP_
