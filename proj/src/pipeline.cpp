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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <thread>

#include "fnv.hpp"

namespace sybil {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Everything detect() shares read-only across component workers.
struct DetectContext {
  const DetectConfig* config = nullptr;
  ClusterParams params;
  std::vector<std::string> chains;
  std::map<std::string, TransactionGraph> chain_graphs;
  TransactionGraph merged;
  std::map<AccountId, ActivitySequence> sequences;
  const std::optional<std::set<AccountId>>* eligible = nullptr;
};

bool covers_two(const ClusterReport& c, const std::set<AccountId>& members) {
  auto count_in = [&](const auto& range) {
    return std::count_if(range.begin(), range.end(),
                         [&](const AccountId& a) { return members.contains(a); });
  };
  for (const auto& s : c.sequential) {
    if (count_in(s.covered_seed) >= 2) return true;
  }
  for (const auto& r : c.radial) {
    if (count_in(r.spokes) >= 2) return true;
  }
  for (const auto& x : c.complex) {
    for (const auto& s : x.sequential) {
      if (count_in(s.covered_seed) >= 2) return true;
    }
    for (const auto& r : x.radial) {
      if (count_in(r.spokes) >= 2) return true;
    }
  }
  return false;
}

void search_cluster(const DetectContext& ctx, ClusterReport& cluster) {
  const DetectConfig& cfg = *ctx.config;
  for (const auto& chain : ctx.chains) {
    const TransactionGraph& g = ctx.chain_graphs.at(chain);
    std::set<AccountId> seed;
    for (const auto& a : cluster.accounts) {
      if (g.contains(a)) seed.insert(a);
    }
    if (seed.size() < 2) continue;
    const Subgraph sg = extract_subgraph(g, seed, cfg.caps);
    if (cfg.sequential) {
      for (auto& p : search_sequential(sg, seed)) {
        p.chain = chain;
        cluster.sequential.push_back(std::move(p));
      }
    }
    if (cfg.radial) {
      for (auto& p : search_radial(sg, seed)) {
        p.chain = chain;
        cluster.radial.push_back(std::move(p));
      }
    }
    if (cfg.complex) {
      for (ComplexOrder order : {ComplexOrder::kRadialFirst, ComplexOrder::kSequentialFirst}) {
        for (auto& p : search_complex(sg, seed, order)) {
          if (!p.linked()) continue;
          p.chain = chain;
          for (auto& r : p.radial) r.chain = chain;
          for (auto& s : p.sequential) s.chain = chain;
          cluster.complex.push_back(std::move(p));
        }
      }
    }
  }
  const std::set<AccountId> members(cluster.accounts.begin(), cluster.accounts.end());
  cluster.flagged = covers_two(cluster, members);
}

std::optional<ComponentReport> process_component(const DetectContext& ctx, size_t id,
                                                 const std::vector<AccountId>& members) {
  const DetectConfig& cfg = *ctx.config;
  std::vector<AccountId> accounts;
  std::vector<const ActivitySequence*> seqs;
  for (const auto& a : members) {
    auto it = ctx.sequences.find(a);
    if (it == ctx.sequences.end()) continue;
    if (*ctx.eligible && !(*ctx.eligible)->contains(a)) continue;
    if (ctx.merged.degree(*ctx.merged.find(a)) > cfg.caps.hub_degree_threshold) continue;
    accounts.push_back(a);
    seqs.push_back(&it->second);
  }
  if (accounts.size() < cfg.min_component_size) return std::nullopt;

  const SimilarityIndex index(seqs, cfg.match);
  std::vector<double> sim(accounts.size() * accounts.size(), 1.0);
  DistanceMatrix dist(accounts.size());
  for (size_t i = 0; i < accounts.size(); ++i) {
    for (size_t j = i + 1; j < accounts.size(); ++j) {
      const double s = index.similarity(i, j);
      sim[i * accounts.size() + j] = sim[j * accounts.size() + i] = s;
      dist.set(i, j, 1.0 - s);
    }
  }
  // members are sorted, so row order is already the scan order.
  const Clustering clustering = dbscan(accounts, dist, ctx.params);

  ComponentReport comp;
  comp.id = id;
  comp.vertex_count = members.size();
  comp.account_count = accounts.size();
  comp.params = ctx.params;
  comp.noise = clustering.noise;
  for (const auto& members_of_cluster : clustering.clusters) {
    ClusterReport cluster;
    cluster.accounts = members_of_cluster;
    std::vector<size_t> rows;
    for (const auto& a : cluster.accounts) {
      rows.push_back(static_cast<size_t>(
          std::lower_bound(accounts.begin(), accounts.end(), a) - accounts.begin()));
    }
    double total = 0.0;
    size_t pairs = 0;
    for (size_t x = 0; x < rows.size(); ++x) {
      for (size_t y = x + 1; y < rows.size(); ++y) {
        total += sim[rows[x] * accounts.size() + rows[y]];
        ++pairs;
      }
    }
    cluster.mean_similarity = pairs == 0 ? 1.0 : total / static_cast<double>(pairs);
    search_cluster(ctx, cluster);
    comp.clusters.push_back(std::move(cluster));
  }
  return comp;
}

ordered_json seq_json(const SequentialPattern& p) {
  ordered_json j;
  j["chain"] = p.chain;
  j["path_vertices"] = p.path_vertices;
  j["covered_seed"] = p.covered_seed;
  return j;
}

ordered_json radial_json(const RadialPattern& p) {
  ordered_json j;
  j["chain"] = p.chain;
  j["center"] = p.center;
  j["spokes"] = p.spokes;
  return j;
}

SequentialPattern seq_from(const json& j) {
  SequentialPattern p;
  p.chain = j.at("chain").get<std::string>();
  p.path_vertices = j.at("path_vertices").get<std::vector<AccountId>>();
  p.covered_seed = j.at("covered_seed").get<std::set<AccountId>>();
  return p;
}

RadialPattern radial_from(const json& j) {
  RadialPattern p;
  p.chain = j.at("chain").get<std::string>();
  p.center = j.at("center").get<std::string>();
  p.spokes = j.at("spokes").get<std::set<AccountId>>();
  return p;
}

}  // namespace

std::string Snapshot::id() const {
  internal::Fnv1a h;
  for (const auto& [chain, txs] : transactions) {
    h.update("chain:");
    h.update(chain);
    h.update("\n");
    for (const auto& tx : txs) {
      h.update(serialize_transaction(tx));
      h.update("\n");
    }
  }
  h.update("events\n");
  for (const auto& ev : events) {
    h.update(serialize_event(ev));
    h.update("\n");
  }
  auto list = [&](const char* tag, const std::set<AccountId>& s) {
    h.update(tag);
    for (const auto& a : s) {
      h.update(a);
      h.update("\n");
    }
  };
  list("contracts\n", filters.contract_addresses);
  list("exchanges\n", filters.exchange_addresses);
  list("whitelist\n", filters.whitelist);
  if (eligible) list("eligible\n", *eligible);
  return h.hex();
}

json DetectConfig::to_json() const {
  json j;
  j["chains"] = chains;
  if (cluster) {
    j["cluster"] = {{"eps", cluster->eps}, {"min_pts", cluster->min_pts}};
  } else {
    j["cluster"] = nullptr;
  }
  j["match"] = {{"mode", match.kind == MatchMode::Kind::kTypeOnly ? "type" : "type_and_amount"},
                {"delta", match.delta}};
  j["subgraph"] = {{"max_vertices", caps.max_vertices},
                   {"hub_degree_threshold", caps.hub_degree_threshold}};
  j["min_component_size"] = min_component_size;
  j["patterns"] = {{"sequential", sequential}, {"radial", radial}, {"complex", complex}};
  return j;
}

DetectConfig DetectConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("detect section must be an object");
  DetectConfig c;
  try {
    if (auto it = j.find("chains"); it != j.end() && !it->is_null()) {
      c.chains = it->get<std::vector<std::string>>();
    }
    if (auto it = j.find("cluster"); it != j.end() && !it->is_null()) {
      ClusterParams p;
      p.eps = it->value("eps", p.eps);
      const auto min_pts = it->value("min_pts", int64_t{3});
      if (min_pts < 1) throw ConfigError("cluster.min_pts must be at least 1");
      p.min_pts = static_cast<size_t>(min_pts);
      c.cluster = p;
    }
    if (auto it = j.find("match"); it != j.end() && !it->is_null()) {
      const auto mode = it->value("mode", std::string("type"));
      if (mode == "type") {
        c.match = MatchMode::type_only();
      } else if (mode == "type_and_amount") {
        c.match = MatchMode::type_and_amount(it->value("delta", MatchMode::kDefaultDelta));
      } else {
        throw ConfigError("unknown match mode: " + mode);
      }
      c.match.delta = it->value("delta", MatchMode::kDefaultDelta);
      if (!(c.match.delta >= 0.0)) throw ConfigError("match.delta must be non-negative");
    }
    if (auto it = j.find("subgraph"); it != j.end() && !it->is_null()) {
      c.caps.max_vertices = it->value("max_vertices", c.caps.max_vertices);
      c.caps.hub_degree_threshold = it->value("hub_degree_threshold", c.caps.hub_degree_threshold);
    }
    c.min_component_size = j.value("min_component_size", c.min_component_size);
    if (auto it = j.find("patterns"); it != j.end() && !it->is_null()) {
      c.sequential = it->value("sequential", c.sequential);
      c.radial = it->value("radial", c.radial);
      c.complex = it->value("complex", c.complex);
    }
    // Accepted as input only; to_json leaves it out so the hash ignores it.
    const auto jobs = j.value("jobs", int64_t{1});
    if (jobs < 1) throw ConfigError("jobs must be at least 1");
    c.jobs = static_cast<size_t>(jobs);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid detect config: ") + e.what());
  }
  if (c.cluster) {
    try {
      c.cluster->validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return c;
}

std::string DetectConfig::hash() const {
  internal::Fnv1a h;
  h.update(to_json().dump());
  return h.hex();
}

DetectionReport detect(const Snapshot& snapshot, const DetectConfig& config) {
  DetectContext ctx;
  ctx.config = &config;
  ctx.eligible = &snapshot.eligible;

  std::vector<Transaction> all;
  for (const auto& [chain, txs] : snapshot.transactions) {
    auto kept = apply_filters(txs, snapshot.filters);
    ctx.chain_graphs.emplace(chain, build_graph(kept));
    all.insert(all.end(), kept.begin(), kept.end());
  }
  if (config.chains.empty()) {
    for (const auto& [chain, g] : ctx.chain_graphs) ctx.chains.push_back(chain);
  } else {
    for (const auto& chain : config.chains) {
      if (!ctx.chain_graphs.contains(chain)) throw ConfigError("unknown chain: " + chain);
    }
    ctx.chains = config.chains;
    std::sort(ctx.chains.begin(), ctx.chains.end());
    ctx.chains.erase(std::unique(ctx.chains.begin(), ctx.chains.end()), ctx.chains.end());
  }
  if (config.cluster) {
    ctx.params = *config.cluster;
  } else if (ctx.chains.size() == 1 && default_cluster_params(ctx.chains.front())) {
    ctx.params = *default_cluster_params(ctx.chains.front());
  }
  ctx.params.validate();

  ctx.merged = build_graph(all);
  ctx.sequences = build_activity_sequences(snapshot.events).sequences;

  const auto components = connected_components(ctx.merged);
  std::vector<std::optional<ComponentReport>> results(components.size());
  const size_t jobs = std::max<size_t>(1, std::min(config.jobs, components.size()));
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    try {
      for (size_t i = next++; i < components.size(); i = next++) {
        results[i] = process_component(ctx, i, components[i]);
      }
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  DetectionReport report;
  report.snapshot_id = snapshot.id();
  report.config_hash = config.hash();
  report.generated_at = utc_now();
  report.total_components = components.size();
  for (auto& r : results) {
    if (!r) continue;
    for (const auto& c : r->clusters) {
      if (c.flagged) report.flagged_accounts.insert(c.accounts.begin(), c.accounts.end());
    }
    report.components.push_back(std::move(*r));
  }
  return report;
}

ordered_json report_to_json(const DetectionReport& report) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["run_metadata"] = {{"snapshot_id", report.snapshot_id},
                       {"config_hash", report.config_hash},
                       {"generated_at", report.generated_at}};
  j["total_components"] = report.total_components;
  ordered_json comps = ordered_json::array();
  for (const auto& c : report.components) {
    ordered_json cj;
    cj["id"] = c.id;
    cj["vertex_count"] = c.vertex_count;
    cj["account_count"] = c.account_count;
    cj["params"] = {{"eps", c.params.eps}, {"min_pts", c.params.min_pts}};
    ordered_json clusters = ordered_json::array();
    for (const auto& k : c.clusters) {
      ordered_json kj;
      kj["accounts"] = k.accounts;
      kj["mean_similarity"] = k.mean_similarity;
      kj["flagged"] = k.flagged;
      ordered_json seq = ordered_json::array(), rad = ordered_json::array(),
                   cpx = ordered_json::array();
      for (const auto& p : k.sequential) seq.push_back(seq_json(p));
      for (const auto& p : k.radial) rad.push_back(radial_json(p));
      for (const auto& p : k.complex) {
        ordered_json pj;
        pj["chain"] = p.chain;
        pj["order"] = to_string(p.order);
        pj["join_vertices"] = p.join_vertices;
        ordered_json pr = ordered_json::array(), ps = ordered_json::array();
        for (const auto& r : p.radial) pr.push_back(radial_json(r));
        for (const auto& s : p.sequential) ps.push_back(seq_json(s));
        pj["radial"] = std::move(pr);
        pj["sequential"] = std::move(ps);
        cpx.push_back(std::move(pj));
      }
      kj["patterns"] = {{"sequential", std::move(seq)},
                        {"radial", std::move(rad)},
                        {"complex", std::move(cpx)}};
      clusters.push_back(std::move(kj));
    }
    cj["clusters"] = std::move(clusters);
    cj["noise"] = c.noise;
    comps.push_back(std::move(cj));
  }
  j["components"] = std::move(comps);
  j["flagged_accounts"] = report.flagged_accounts;
  return j;
}

DetectionReport report_from_json(const json& j) {
  if (j.value("schema", std::string{}) != kReportSchema) {
    throw std::invalid_argument("unsupported report schema");
  }
  try {
    DetectionReport r;
    const json& meta = j.at("run_metadata");
    r.snapshot_id = meta.at("snapshot_id").get<std::string>();
    r.config_hash = meta.at("config_hash").get<std::string>();
    r.generated_at = meta.at("generated_at").get<std::string>();
    r.total_components = j.at("total_components").get<size_t>();
    for (const auto& cj : j.at("components")) {
      ComponentReport c;
      c.id = cj.at("id").get<size_t>();
      c.vertex_count = cj.at("vertex_count").get<size_t>();
      c.account_count = cj.at("account_count").get<size_t>();
      c.params.eps = cj.at("params").at("eps").get<double>();
      c.params.min_pts = cj.at("params").at("min_pts").get<size_t>();
      for (const auto& kj : cj.at("clusters")) {
        ClusterReport k;
        k.accounts = kj.at("accounts").get<std::vector<AccountId>>();
        k.mean_similarity = kj.at("mean_similarity").get<double>();
        k.flagged = kj.at("flagged").get<bool>();
        const json& pats = kj.at("patterns");
        for (const auto& p : pats.at("sequential")) k.sequential.push_back(seq_from(p));
        for (const auto& p : pats.at("radial")) k.radial.push_back(radial_from(p));
        for (const auto& pj : pats.at("complex")) {
          ComplexPattern p;
          p.chain = pj.at("chain").get<std::string>();
          p.order = complex_order_from_string(pj.at("order").get<std::string>());
          p.join_vertices = pj.at("join_vertices").get<std::vector<AccountId>>();
          for (const auto& r2 : pj.at("radial")) p.radial.push_back(radial_from(r2));
          for (const auto& s : pj.at("sequential")) p.sequential.push_back(seq_from(s));
          k.complex.push_back(std::move(p));
        }
        c.clusters.push_back(std::move(k));
      }
      c.noise = cj.at("noise").get<std::vector<AccountId>>();
      r.components.push_back(std::move(c));
    }
    r.flagged_accounts = j.at("flagged_accounts").get<std::set<AccountId>>();
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

ordered_json GroundTruth::to_json() const {
  ordered_json j;
  j["schema"] = kTruthSchema;
  j["snapshot_id"] = snapshot_id;
  ordered_json bots = ordered_json::array();
  std::map<std::string, std::vector<AccountId>> members;
  for (const auto& [account, bot] : bot_of) members[bot].push_back(account);
  for (const auto& [bot, pattern] : pattern_of_bot) {
    bots.push_back({{"bot_id", bot}, {"pattern", pattern}, {"accounts", members[bot]}});
  }
  j["bots"] = std::move(bots);
  return j;
}

GroundTruth GroundTruth::from_json(const json& j) {
  if (j.value("schema", std::string{}) != kTruthSchema) {
    throw std::invalid_argument("unsupported ground truth schema");
  }
  try {
    GroundTruth t;
    t.snapshot_id = j.at("snapshot_id").get<std::string>();
    for (const auto& b : j.at("bots")) {
      const auto bot = b.at("bot_id").get<std::string>();
      t.pattern_of_bot[bot] = b.at("pattern").get<std::string>();
      for (const auto& a : b.at("accounts")) {
        auto [it, inserted] = t.bot_of.emplace(a.get<std::string>(), bot);
        if (!inserted) throw std::invalid_argument("account labeled by two bots: " + it->first);
      }
    }
    return t;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed ground truth: ") + e.what());
  }
}

ordered_json Metrics::to_json() const {
  auto opt = [](const std::optional<double>& v) -> ordered_json {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  ordered_json j;
  j["precision"] = opt(precision);
  j["recall"] = opt(recall);
  j["f1"] = opt(f1);
  ordered_json per = ordered_json::object();
  for (const auto& [type, value] : pattern_recall) per[type] = opt(value);
  j["pattern_recall"] = std::move(per);
  j["flagged"] = flagged;
  j["true_positives"] = true_positives;
  j["bot_accounts"] = bot_accounts;
  return j;
}

Metrics evaluate(const DetectionReport& report, const GroundTruth& truth) {
  Metrics m;
  m.flagged = report.flagged_accounts.size();
  m.bot_accounts = truth.bot_of.size();
  for (const auto& a : report.flagged_accounts) {
    if (truth.bot_of.contains(a)) ++m.true_positives;
  }
  const auto tp = static_cast<double>(m.true_positives);
  if (m.flagged > 0) m.precision = tp / static_cast<double>(m.flagged);
  if (m.bot_accounts > 0) m.recall = tp / static_cast<double>(m.bot_accounts);
  const size_t f1_denominator = 2 * m.true_positives + (m.flagged - m.true_positives) +
                                (m.bot_accounts - m.true_positives);
  if (f1_denominator > 0) m.f1 = 2.0 * tp / static_cast<double>(f1_denominator);

  std::map<std::string, size_t> bot_size;
  for (const auto& [account, bot] : truth.bot_of) ++bot_size[bot];
  std::set<std::string> recovered;
  for (const auto& comp : report.components) {
    for (const auto& cluster : comp.clusters) {
      if (!cluster.flagged) continue;
      std::map<std::string, size_t> hits;
      for (const auto& a : cluster.accounts) {
        if (auto it = truth.bot_of.find(a); it != truth.bot_of.end()) ++hits[it->second];
      }
      for (const auto& [bot, count] : hits) {
        if (2 * count >= bot_size[bot]) recovered.insert(bot);
      }
    }
  }
  std::map<std::string, std::pair<size_t, size_t>> per_type;  // recovered, total
  for (const auto& [bot, pattern] : truth.pattern_of_bot) {
    auto& [hit, total] = per_type[pattern];
    ++total;
    if (recovered.contains(bot)) ++hit;
  }
  for (const auto& [type, counts] : per_type) {
    m.pattern_recall[type] = counts.second == 0
                                 ? std::nullopt
                                 : std::optional<double>(static_cast<double>(counts.first) /
                                                         static_cast<double>(counts.second));
  }
  return m;
}

}  // namespace sybil
