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

#include "sybilscope/txgraph.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"

namespace sybil {
namespace {

using Edges = std::vector<std::pair<AccountId, AccountId>>;

Transaction transfer(const std::string& hash, const std::string& from, const std::string& to,
                     const std::string& amount, int64_t ts) {
  Transaction t;
  t.tx_hash = hash;
  t.chain = "c";
  t.timestamp = ts;
  t.from = {"c", from};
  t.to = {"c", to};
  t.amount = Amount::parse(amount);
  return t;
}

std::set<AccountId> names(const Digraph& g) { return {g.names().begin(), g.names().end()}; }

Digraph from_adjacency(const oracle::Adjacency& adj) {
  Edges edges;
  std::vector<AccountId> all;
  for (size_t u = 0; u < adj.size(); ++u) {
    all.push_back(oracle::vertex_name(u));
    for (size_t v = 0; v < adj.size(); ++v) {
      if (adj[u][v]) edges.emplace_back(oracle::vertex_name(u), oracle::vertex_name(v));
    }
  }
  return Digraph::from_edge_list(edges, all);
}

TEST(BuildGraphTest, AggregatesParallelTransfers) {
  const std::vector<Transaction> txs = {transfer("1", "a", "b", "1.5", 20),
                                        transfer("2", "a", "b", "2", 10)};
  const auto g = build_graph(txs);
  ASSERT_EQ(g.size(), 2u);
  ASSERT_EQ(g.edge_count(), 1u);
  const EdgeAggregate* e = g.edge(*g.find("a"), *g.find("b"));
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->tx_count, 2u);
  EXPECT_EQ(e->total_amount, Amount::parse("3.5"));
  EXPECT_EQ(e->first_ts, 10);
  EXPECT_EQ(e->last_ts, 20);
}

TEST(BuildGraphTest, SelfTransferAddsVertexOnly) {
  const std::vector<Transaction> txs = {transfer("1", "a", "a", "1", 0)};
  const auto g = build_graph(txs);
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_TRUE(build_graph({}).empty());
}

TEST(BuildGraphTest, PermutationInvariant) {
  std::mt19937_64 rng(9);
  const std::vector<std::string> v = {"a", "b", "c", "d", "e"};
  std::vector<Transaction> txs;
  for (int i = 0; i < 60; ++i) {
    txs.push_back(transfer(std::to_string(i), v[rng() % 5], v[rng() % 5],
                           std::to_string(rng() % 100), static_cast<int64_t>(rng() % 1000)));
  }
  const auto ref = build_graph(txs);
  for (const auto& [key, agg] : ref.edges()) {
    EXPECT_GE(agg.tx_count, 1u);
    EXPECT_LE(agg.first_ts, agg.last_ts);
    EXPECT_NE(key.first, key.second);
  }
  for (int round = 0; round < 20; ++round) {
    std::shuffle(txs.begin(), txs.end(), rng);
    const auto g = build_graph(txs);
    EXPECT_EQ(g.names(), ref.names());
    EXPECT_EQ(g.edges(), ref.edges());
  }
}

TEST(ConnectedComponentsTest, Examples) {
  using C = std::vector<std::vector<AccountId>>;
  EXPECT_EQ(connected_components(Digraph::from_edge_list({{"a", "b"}, {"c", "d"}})),
            (C{{"a", "b"}, {"c", "d"}}));
  EXPECT_EQ(connected_components(Digraph::from_edge_list({{"a", "b"}, {"b", "c"}})),
            (C{{"a", "b", "c"}}));
  EXPECT_EQ(connected_components(Digraph::from_edge_list({{"b", "a"}}, {"x"})),
            (C{{"a", "b"}, {"x"}}));
}

TEST(ExtractSubgraphTest, TwoHopsIgnoringDirection) {
  const auto g = Digraph::from_edge_list({{"t", "a"}, {"s", "t"}, {"x", "s"}});
  const auto sg = extract_subgraph(g, {"a"});
  EXPECT_EQ(names(sg.graph), (std::set<AccountId>{"a", "s", "t"}));
  EXPECT_EQ(sg.graph.edge_count(), 2u);
  EXPECT_EQ(sg.distance[*sg.graph.find("s")], 2);
}

TEST(ExtractSubgraphTest, IsolatedSeed) {
  const auto g = Digraph::from_edge_list({{"b", "c"}}, {"a"});
  const auto sg = extract_subgraph(g, {"a"});
  EXPECT_EQ(names(sg.graph), (std::set<AccountId>{"a"}));
  EXPECT_EQ(sg.graph.edge_count(), 0u);
}

TEST(ExtractSubgraphTest, HubsExcludedAndNotTraversed) {
  Edges edges = {{"h", "a"}, {"h", "z"}};
  for (int i = 0; i < 5; ++i) edges.emplace_back("h", "f" + std::to_string(i));
  const auto g = Digraph::from_edge_list(edges);
  const auto sg = extract_subgraph(g, {"a"}, SubgraphCaps{5000, 4});
  EXPECT_EQ(names(sg.graph), (std::set<AccountId>{"a"}));
  // A hub seed is kept but does not expand.
  const auto hub_seed = extract_subgraph(g, {"h"}, SubgraphCaps{5000, 4});
  EXPECT_EQ(names(hub_seed.graph), (std::set<AccountId>{"h"}));
}

TEST(ExtractSubgraphTest, TruncatesByDistanceThenAddress) {
  const auto g = Digraph::from_edge_list(
      {{"s", "d1"}, {"s", "c1"}, {"c1", "b2"}, {"d1", "a2"}, {"z", "s"}});
  const auto sg = extract_subgraph(g, {"s"}, SubgraphCaps{4, 1000});
  EXPECT_EQ(names(sg.graph), (std::set<AccountId>{"s", "c1", "d1", "z"}));
  const auto sg2 = extract_subgraph(g, {"s"}, SubgraphCaps{5, 1000});
  EXPECT_EQ(names(sg2.graph), (std::set<AccountId>{"s", "c1", "d1", "z", "a2"}));
}

TEST(ExtractSubgraphTest, Errors) {
  const auto g = Digraph::from_edge_list({{"a", "b"}});
  EXPECT_THROW(extract_subgraph(g, {}), std::invalid_argument);
  EXPECT_THROW(extract_subgraph(g, {"q"}), std::invalid_argument);
}

TEST(ExtractSubgraphTest, RandomInvariants) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 200; ++round) {
    const size_t n = 2 + rng() % 25;
    const auto g = from_adjacency(oracle::random_digraph(rng, n, 0.08));
    std::set<AccountId> seed;
    for (size_t k = std::min<size_t>(1 + rng() % 3, n); seed.size() < k;) {
      seed.insert(oracle::vertex_name(rng() % n));
    }
    const auto sg = extract_subgraph(g, seed);
    // Every retained vertex is within undirected distance 2 of the seed.
    std::vector<int> best(g.size(), -1);
    for (const auto& s : seed) {
      const auto d = hop_distances(g, *g.find(s), 2, false);
      for (size_t v = 0; v < g.size(); ++v) {
        if (d[v] >= 0 && (best[v] < 0 || d[v] < best[v])) best[v] = d[v];
      }
    }
    std::set<AccountId> expect;
    for (size_t v = 0; v < g.size(); ++v) {
      if (best[v] >= 0) expect.insert(g.name(v));
    }
    EXPECT_EQ(names(sg.graph), expect);
    for (const auto& s : seed) EXPECT_TRUE(sg.graph.contains(s));
    // Edges are exactly the induced ones, direction kept.
    size_t induced = 0;
    for (const auto& [key, agg] : g.edges()) {
      auto u = sg.graph.find(g.name(key.first));
      auto v = sg.graph.find(g.name(key.second));
      if (u && v) {
        ++induced;
        EXPECT_NE(sg.graph.edge(*u, *v), nullptr);
      }
    }
    EXPECT_EQ(sg.graph.edge_count(), induced);
  }
}

TEST(CondenseTest, Examples) {
  const auto g = Digraph::from_edge_list({{"a", "b"}, {"b", "a"}, {"b", "c"}});
  const auto cond = condense_sccs(g);
  ASSERT_EQ(cond.sccs.size(), 2u);
  EXPECT_EQ(cond.sccs[0], (std::vector<VertexId>{0, 1}));
  EXPECT_EQ(cond.sccs[1], (std::vector<VertexId>{2}));
  EXPECT_EQ(cond.dag_edges, (std::set<std::pair<SccIndex, SccIndex>>{{0, 1}}));

  const auto dag = condense_sccs(Digraph::from_edge_list({{"a", "b"}, {"a", "c"}, {"b", "c"}}));
  EXPECT_EQ(dag.sccs.size(), 3u);

  const auto empty = condense_sccs(Digraph{});
  EXPECT_TRUE(empty.sccs.empty());
  EXPECT_TRUE(empty.topo_order.empty());
}

TEST(CondenseTest, RandomInvariants) {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 300; ++round) {
    const size_t n = 1 + rng() % 14;
    const auto g = from_adjacency(oracle::random_digraph(rng, n, 0.15 + 0.1 * (rng() % 3)));
    const auto cond = condense_sccs(g);
    const ReachabilityGraph reach(g);
    // Partition.
    std::vector<int> seen(n, 0);
    for (const auto& scc : cond.sccs) {
      for (VertexId v : scc) seen[v]++;
    }
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    // Same SCC iff mutually reachable; the reachability graph is complete on an SCC.
    for (VertexId u = 0; u < n; ++u) {
      for (VertexId v = 0; v < n; ++v) {
        if (u == v) continue;
        const bool same = cond.vertex_to_scc[u] == cond.vertex_to_scc[v];
        EXPECT_EQ(same, reach.reaches(u, v) && reach.reaches(v, u));
        if (same) EXPECT_TRUE(reach.adjacent(u, v));
      }
    }
    // Topological order respects every dag edge.
    std::vector<size_t> pos(cond.sccs.size());
    ASSERT_EQ(cond.topo_order.size(), cond.sccs.size());
    for (size_t i = 0; i < cond.topo_order.size(); ++i) pos[cond.topo_order[i]] = i;
    for (const auto& [a, b] : cond.dag_edges) {
      EXPECT_NE(a, b);
      EXPECT_LT(pos[a], pos[b]);
    }
  }
}

TEST(ReachabilityTest, Examples) {
  using P = std::vector<std::pair<VertexId, VertexId>>;
  EXPECT_EQ(ReachabilityGraph(Digraph::from_edge_list({{"a", "b"}, {"b", "c"}})).edges(),
            (P{{0, 1}, {0, 2}, {1, 2}}));
  // t -> a, t -> b: ids a=0, b=1, t=2.
  EXPECT_EQ(ReachabilityGraph(Digraph::from_edge_list({{"t", "a"}, {"t", "b"}})).edges(),
            (P{{0, 2}, {1, 2}}));
  EXPECT_TRUE(ReachabilityGraph(Digraph{}).edges().empty());
}

TEST(ReachabilityTest, MatchesTransitiveClosure) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 200; ++round) {
    const size_t n = 1 + rng() % 12;
    auto adj = oracle::random_digraph(rng, n, 0.2);
    const ReachabilityGraph reach(from_adjacency(adj));
    // Warshall closure.
    auto closure = adj;
    for (size_t k = 0; k < n; ++k) {
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
          if (closure[i][k] && closure[k][j]) closure[i][j] = true;
        }
      }
    }
    for (VertexId u = 0; u < n; ++u) {
      for (VertexId v = 0; v < n; ++v) {
        if (u != v) EXPECT_EQ(reach.reaches(u, v), static_cast<bool>(closure[u][v]));
      }
    }
  }
}

}  // namespace
}  // namespace sybil
