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

#include "sybilscope/pipeline.hpp"

#include <gtest/gtest.h>

#include <random>

#include "sybilscope/synthgen.hpp"

namespace sybil {
namespace {

using nlohmann::json;

class SnapshotBuilder {
 public:
  SnapshotBuilder& transfer(const std::string& from, const std::string& to,
                            const std::string& chain = "arbitrum") {
    Transaction t;
    t.tx_hash = "t" + std::to_string(counter_++);
    t.chain = chain;
    t.timestamp = static_cast<int64_t>(counter_);
    t.from = {chain, from};
    t.to = {chain, to};
    t.token = "ETH";
    t.amount = Amount::parse("1");
    snap_.transactions[chain].push_back(t);
    return *this;
  }
  SnapshotBuilder& activities(const std::string& account, const std::vector<std::string>& types) {
    for (const auto& type : types) {
      DappEvent e;
      e.chain = "arbitrum";
      e.tx_hash = "e" + std::to_string(counter_++);
      e.block_time = static_cast<int64_t>(counter_);
      e.account = account;
      e.activity_type = type;
      snap_.events.push_back(e);
    }
    return *this;
  }
  Snapshot build() const { return snap_; }
  Snapshot& snap() { return snap_; }

 private:
  Snapshot snap_;
  size_t counter_ = 0;
};

const std::vector<std::string> kTemplate = {"send", "convert", "stake", "claim", "swap"};

DetectConfig config_with(double eps, size_t min_pts) {
  DetectConfig cfg;
  cfg.cluster = ClusterParams{eps, min_pts};
  return cfg;
}

ScenarioConfig recovery_scenario(uint64_t seed) {
  ScenarioConfig sc;
  sc.seed = seed;
  sc.n_radial_bots = 3;
  sc.radial_accounts = 6;
  sc.n_sequential_bots = 3;
  sc.sequential_accounts = 5;
  sc.n_complex_bots = 2;
  sc.n_ordinary_users = 80;
  return sc;
}

TEST(DetectTest, EmptySnapshot) {
  const auto report = detect(Snapshot{}, DetectConfig{});
  EXPECT_EQ(report.total_components, 0u);
  EXPECT_TRUE(report.components.empty());
  EXPECT_TRUE(report.flagged_accounts.empty());
}

TEST(DetectTest, UnknownChainIsConfigError) {
  SnapshotBuilder b;
  b.transfer("a", "b");
  DetectConfig cfg;
  cfg.chains = {"gnosis"};
  EXPECT_THROW(detect(b.build(), cfg), ConfigError);
}

TEST(DetectTest, PlantedRadialBotAmongOrdinaryUsers) {
  ScenarioConfig sc;
  sc.seed = 5;
  sc.chains = {"arbitrum"};
  sc.n_radial_bots = 1;
  sc.radial_accounts = 5;
  sc.n_ordinary_users = 50;
  sc.template_pool_size = 50;
  sc.noise_probability = 0.0;
  const Scenario scenario = generate(sc);
  const auto& [treasury, bot_accounts] = scenario.bots.begin()->second;

  const auto report = detect(scenario.snapshot, DetectConfig{});
  EXPECT_EQ(report.flagged_accounts,
            std::set<AccountId>(bot_accounts.begin(), bot_accounts.end()));
  std::vector<RadialPattern> radial;
  for (const auto& comp : report.components) {
    for (const auto& cluster : comp.clusters) {
      if (cluster.flagged) radial.insert(radial.end(), cluster.radial.begin(), cluster.radial.end());
    }
  }
  ASSERT_EQ(radial.size(), 1u);
  EXPECT_EQ(radial[0].center, treasury);
  EXPECT_EQ(radial[0].spokes, std::set<AccountId>(bot_accounts.begin(), bot_accounts.end()));
}

TEST(DetectTest, SimilarButUnconnectedAccountsAreNotFlagged) {
  // a1..a4 share one template and sit in one component, but every link
  // between them alternates direction through relays more than two hops
  // long, so no centre reaches two of them and no chain holds three.
  SnapshotBuilder b;
  const std::vector<std::string> a = {"a1", "a2", "a3", "a4"};
  for (size_t i = 0; i + 1 < a.size(); ++i) {
    const std::string k = std::to_string(i);
    b.transfer(a[i], "m" + k).transfer("n" + k, "m" + k).transfer("n" + k, "p" + k);
    b.transfer(a[i + 1], "p" + k);
  }
  for (const auto& x : a) b.activities(x, kTemplate);
  const auto report = detect(b.build(), config_with(0.3, 3));
  ASSERT_EQ(report.components.size(), 1u);
  ASSERT_EQ(report.components[0].clusters.size(), 1u);
  EXPECT_EQ(report.components[0].clusters[0].accounts, a);
  EXPECT_DOUBLE_EQ(report.components[0].clusters[0].mean_similarity, 1.0);
  EXPECT_FALSE(report.components[0].clusters[0].flagged);
  EXPECT_TRUE(report.flagged_accounts.empty());
}

TEST(DetectTest, SmallComponentsAreSkipped) {
  SnapshotBuilder b;
  b.transfer("t", "a").transfer("t", "b").transfer("t", "c");
  for (const auto& x : {"a", "b", "c"}) b.activities(x, kTemplate);
  EXPECT_TRUE(detect(b.build(), config_with(0.3, 3)).components.empty());
  DetectConfig cfg = config_with(0.3, 3);
  cfg.min_component_size = 3;
  const auto report = detect(b.build(), cfg);
  ASSERT_EQ(report.components.size(), 1u);
  EXPECT_EQ(report.flagged_accounts, (std::set<AccountId>{"a", "b", "c"}));
}

TEST(DetectTest, FiltersKeepWhitelistAndExchangesOut) {
  SnapshotBuilder b;
  for (const auto& x : {"a", "b", "c", "d"}) {
    b.transfer("t", x).transfer("w", x).activities(x, kTemplate);
  }
  b.activities("w", kTemplate);
  b.snap().filters.whitelist = {"w"};
  b.snap().filters.exchange_addresses = {"t"};
  const auto report = detect(b.build(), config_with(0.3, 3));
  // With the funding star removed nothing connects the accounts.
  EXPECT_TRUE(report.flagged_accounts.empty());
  EXPECT_EQ(report.total_components, 0u);
}

TEST(DetectTest, HubAccountsAreNotClustered) {
  SnapshotBuilder b;
  for (int i = 0; i < 6; ++i) {
    const std::string x = "u" + std::to_string(i);
    b.transfer("h", x).activities(x, kTemplate);
  }
  b.activities("h", kTemplate);
  DetectConfig cfg = config_with(0.3, 3);
  cfg.caps.hub_degree_threshold = 5;
  const auto report = detect(b.build(), cfg);
  ASSERT_EQ(report.components.size(), 1u);
  EXPECT_EQ(report.components[0].account_count, 6u);
  // The hub is dropped from subgraphs too, so the star is invisible.
  EXPECT_TRUE(report.flagged_accounts.empty());
}

TEST(DetectTest, ChainScopedSearch) {
  SnapshotBuilder b;
  for (const auto& x : {"a", "b", "c", "d"}) b.transfer("t", x, "optimism").activities(x, kTemplate);
  b.transfer("a", "b", "arbitrum");
  DetectConfig cfg = config_with(0.3, 3);
  cfg.chains = {"arbitrum"};
  EXPECT_TRUE(detect(b.build(), cfg).flagged_accounts.empty());
  cfg.chains = {"optimism"};
  const auto report = detect(b.build(), cfg);
  EXPECT_EQ(report.flagged_accounts.size(), 4u);
  for (const auto& comp : report.components) {
    for (const auto& c : comp.clusters) {
      for (const auto& r : c.radial) EXPECT_EQ(r.chain, "optimism");
    }
  }
}

TEST(DetectTest, DeterministicAcrossJobs) {
  const Scenario scenario = generate(recovery_scenario(3));
  DetectConfig cfg;
  auto dump = [&](size_t jobs) {
    cfg.jobs = jobs;
    DetectionReport r = detect(scenario.snapshot, cfg);
    r.generated_at.clear();
    return report_to_json(r).dump();
  };
  const std::string one = dump(1);
  EXPECT_EQ(dump(2), one);
  EXPECT_EQ(dump(4), one);
  EXPECT_EQ(dump(1), one);
}

TEST(DetectTest, ReportInvariants) {
  const Scenario scenario = generate(recovery_scenario(4));
  const auto report = detect(scenario.snapshot, DetectConfig{});
  std::set<AccountId> snapshot_accounts;
  for (const auto& [chain, txs] : scenario.snapshot.transactions) {
    for (const auto& t : txs) {
      snapshot_accounts.insert(t.from.value);
      snapshot_accounts.insert(t.to.value);
    }
  }
  std::set<AccountId> from_clusters;
  for (const auto& comp : report.components) {
    std::set<AccountId> seen(comp.noise.begin(), comp.noise.end());
    for (const auto& c : comp.clusters) {
      EXPECT_GE(c.mean_similarity, 0.0);
      EXPECT_LE(c.mean_similarity, 1.0);
      for (const auto& a : c.accounts) EXPECT_TRUE(seen.insert(a).second);
      if (c.flagged) from_clusters.insert(c.accounts.begin(), c.accounts.end());
    }
  }
  EXPECT_EQ(report.flagged_accounts, from_clusters);
  for (const auto& a : report.flagged_accounts) {
    EXPECT_TRUE(snapshot_accounts.contains(a));
    EXPECT_FALSE(scenario.snapshot.filters.excludes(a));
  }
}

TEST(ReportJsonTest, RoundTrip) {
  const Scenario scenario = generate(recovery_scenario(6));
  const auto report = detect(scenario.snapshot, DetectConfig{});
  const auto j = report_to_json(report);
  EXPECT_EQ(j["schema"], kReportSchema);
  const auto back = report_from_json(json::parse(j.dump()));
  EXPECT_EQ(report_to_json(back).dump(), j.dump());
  json bad = json::parse(j.dump());
  bad["schema"] = "sybil-report/0";
  EXPECT_THROW(report_from_json(bad), std::invalid_argument);
}

TEST(DetectConfigTest, JsonRoundTripAndHash) {
  DetectConfig cfg;
  cfg.chains = {"optimism"};
  cfg.cluster = ClusterParams{0.3, 4};
  cfg.match = MatchMode::type_and_amount(0.02);
  cfg.caps = {100, 50};
  cfg.min_component_size = 6;
  cfg.complex = false;
  const DetectConfig back = DetectConfig::from_json(cfg.to_json());
  EXPECT_EQ(back.to_json(), cfg.to_json());
  EXPECT_EQ(back.hash(), cfg.hash());
  DetectConfig more_jobs = cfg;
  more_jobs.jobs = 8;
  EXPECT_EQ(more_jobs.hash(), cfg.hash());
  DetectConfig other = cfg;
  other.min_component_size = 5;
  EXPECT_NE(other.hash(), cfg.hash());
}

TEST(DetectConfigTest, RejectsBadValues) {
  EXPECT_THROW(DetectConfig::from_json(json::parse(R"({"cluster":{"eps":2}})")), ConfigError);
  EXPECT_THROW(DetectConfig::from_json(json::parse(R"({"cluster":{"min_pts":0}})")), ConfigError);
  EXPECT_THROW(DetectConfig::from_json(json::parse(R"({"match":{"mode":"fuzzy"}})")), ConfigError);
  EXPECT_THROW(DetectConfig::from_json(json::parse(R"({"chains":"arbitrum"})")), ConfigError);
  EXPECT_THROW(DetectConfig::from_json(json::parse("[]")), ConfigError);
  EXPECT_THROW(DetectConfig::from_json(json::parse(R"({"jobs":0})")), ConfigError);
  EXPECT_EQ(DetectConfig::from_json(json::parse(R"({"jobs":3})")).jobs, 3u);
  EXPECT_EQ(DetectConfig::from_json(json::parse(R"({"jobs":3})")).hash(), DetectConfig{}.hash());
  EXPECT_EQ(DetectConfig::from_json(json::object()).to_json(), DetectConfig{}.to_json());
}

DetectionReport flagged_report(const std::vector<std::vector<AccountId>>& clusters) {
  DetectionReport r;
  ComponentReport comp;
  for (const auto& accounts : clusters) {
    ClusterReport c;
    c.accounts = accounts;
    c.flagged = true;
    r.flagged_accounts.insert(accounts.begin(), accounts.end());
    comp.clusters.push_back(c);
  }
  r.components.push_back(comp);
  return r;
}

GroundTruth truth_of(const std::map<std::string, std::pair<std::string, std::vector<AccountId>>>& bots) {
  GroundTruth t;
  for (const auto& [bot, entry] : bots) {
    t.pattern_of_bot[bot] = entry.first;
    for (const auto& a : entry.second) t.bot_of[a] = bot;
  }
  return t;
}

TEST(EvaluateTest, PerfectReport) {
  const auto truth = truth_of({{"b0", {"radial", {"a", "b", "c"}}}, {"b1", {"sequential", {"d", "e"}}}});
  const auto m = evaluate(flagged_report({{"a", "b", "c"}, {"d", "e"}}), truth);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.f1, 1.0);
  EXPECT_EQ(m.pattern_recall.at("radial"), 1.0);
  EXPECT_EQ(m.pattern_recall.at("sequential"), 1.0);
}

TEST(EvaluateTest, NothingFlagged) {
  const auto truth = truth_of({{"b0", {"radial", {"a", "b"}}}});
  const auto m = evaluate(DetectionReport{}, truth);
  EXPECT_FALSE(m.precision.has_value());
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.f1, 0.0);
  const auto empty = evaluate(DetectionReport{}, GroundTruth{});
  EXPECT_FALSE(empty.precision.has_value());
  EXPECT_FALSE(empty.recall.has_value());
  EXPECT_FALSE(empty.f1.has_value());
  EXPECT_EQ(empty.to_json()["precision"], nullptr);
}

TEST(EvaluateTest, HalfTogetherCountsAsRecovered) {
  const auto truth = truth_of({{"b0", {"radial", {"a", "b", "c", "d"}}},
                               {"b1", {"radial", {"e", "f", "g", "h"}}}});
  // b0: two of four together; b1: split one-one-one.
  const auto m = evaluate(flagged_report({{"a", "b", "x"}, {"e", "y"}, {"f", "z"}, {"g"}}), truth);
  EXPECT_EQ(m.pattern_recall.at("radial"), 0.5);
  EXPECT_EQ(m.true_positives, 5u);
  EXPECT_DOUBLE_EQ(*m.precision, 5.0 / 8.0);
  EXPECT_DOUBLE_EQ(*m.recall, 5.0 / 8.0);
}

TEST(GroundTruthTest, JsonRoundTripAndValidation) {
  auto truth = truth_of({{"b0", {"complex", {"a", "b"}}}});
  truth.snapshot_id = "abc";
  const auto back = GroundTruth::from_json(json::parse(truth.to_json().dump()));
  EXPECT_EQ(back.bot_of, truth.bot_of);
  EXPECT_EQ(back.pattern_of_bot, truth.pattern_of_bot);
  EXPECT_EQ(back.snapshot_id, "abc");
  json twice = json::parse(truth.to_json().dump());
  twice["bots"].push_back({{"bot_id", "b1"}, {"pattern", "radial"}, {"accounts", {"a"}}});
  EXPECT_THROW(GroundTruth::from_json(twice), std::invalid_argument);
}

TEST(SnapshotTest, IdTracksContent) {
  SnapshotBuilder b;
  b.transfer("a", "b");
  const Snapshot s = b.build();
  Snapshot t = s;
  EXPECT_EQ(s.id(), t.id());
  t.filters.whitelist.insert("a");
  EXPECT_NE(s.id(), t.id());
}

}  // namespace
}  // namespace sybil
