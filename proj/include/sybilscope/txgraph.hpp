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

// Directed transaction graphs over accounts and the structural queries the
// pattern searches need: weak components, cluster-centred 2-hop
// subgraphs, SCC condensation and exact reachability.

#ifndef SYBILSCOPE_TXGRAPH_HPP_
#define SYBILSCOPE_TXGRAPH_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sybilscope/amount.hpp"
#include "sybilscope/ingest.hpp"

namespace sybil {

using VertexId = uint32_t;

struct EdgeAggregate {
  uint64_t tx_count = 0;
  Amount total_amount;
  int64_t first_ts = 0;
  int64_t last_ts = 0;

  friend bool operator==(const EdgeAggregate&, const EdgeAggregate&) = default;
};

// Simple directed graph without self-loops. Vertex ids are assigned in
// ascending address order, so id order and address order coincide.
class Digraph {
 public:
  using EdgeMap = std::map<std::pair<VertexId, VertexId>, EdgeAggregate>;

  Digraph() = default;

  size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::vector<AccountId>& names() const { return names_; }
  const AccountId& name(VertexId v) const { return names_[v]; }
  std::optional<VertexId> find(std::string_view account) const;
  bool contains(std::string_view account) const { return find(account).has_value(); }

  std::span<const VertexId> successors(VertexId v) const { return out_[v]; }
  std::span<const VertexId> predecessors(VertexId v) const { return in_[v]; }
  // In-degree plus out-degree.
  size_t degree(VertexId v) const { return out_[v].size() + in_[v].size(); }

  const EdgeMap& edges() const { return edges_; }
  size_t edge_count() const { return edges_.size(); }
  const EdgeAggregate* edge(VertexId from, VertexId to) const;

  // Convenience for fixtures: unit aggregates, self-loops dropped.
  static Digraph from_edge_list(const std::vector<std::pair<AccountId, AccountId>>& edges,
                                const std::vector<AccountId>& extra_vertices = {});

 private:
  friend class DigraphBuilder;

  std::vector<AccountId> names_;
  std::vector<std::vector<VertexId>> out_;
  std::vector<std::vector<VertexId>> in_;
  EdgeMap edges_;
};

// Accumulates transfers keyed by account, then freezes into a Digraph.
class DigraphBuilder {
 public:
  void add_vertex(const AccountId& account);
  void add_transfer(const AccountId& from, const AccountId& to, const Amount& amount,
                    int64_t timestamp);
  void add_edge(const AccountId& from, const AccountId& to, const EdgeAggregate& agg);
  Digraph build() &&;

 private:
  std::set<AccountId> vertices_;
  std::map<std::pair<AccountId, AccountId>, EdgeAggregate> edges_;
};

using TransactionGraph = Digraph;

// One vertex per address, one aggregated edge per ordered pair. Self
// transfers add the vertex only.
TransactionGraph build_graph(std::span<const Transaction> txs);

// Weakly connected components, each sorted, ordered by smallest member.
std::vector<std::vector<AccountId>> connected_components(const Digraph& g);

struct SubgraphCaps {
  size_t max_vertices = 5000;
  size_t hub_degree_threshold = 1000;
};

struct Subgraph {
  std::set<AccountId> seed;
  Digraph graph;
  // Undirected hop distance from the seed set in the parent graph, by
  // subgraph vertex id.
  std::vector<int> distance;

  std::vector<VertexId> seed_ids() const;
};

// Seed plus every vertex within undirected distance 2 of it. Vertices whose
// parent-graph degree exceeds the hub threshold are neither kept (unless
// they are seeds) nor expanded through. Non-seed vertices are truncated by
// (distance, address) so that the total stays within max_vertices; seeds
// are always kept. Throws std::invalid_argument on an empty seed or a
// seed vertex missing from `g`.
Subgraph extract_subgraph(const Digraph& g, const std::set<AccountId>& seed,
                          const SubgraphCaps& caps = {});

using SccIndex = uint32_t;

struct CondensationDag {
  // SCC members sorted; SCCs ordered by their smallest member.
  std::vector<std::vector<VertexId>> sccs;
  std::vector<SccIndex> vertex_to_scc;
  std::set<std::pair<SccIndex, SccIndex>> dag_edges;
  std::vector<std::vector<SccIndex>> successors;
  std::vector<SccIndex> topo_order;
};

CondensationDag condense_sccs(const Digraph& g);
inline CondensationDag condense_sccs(const Subgraph& sg) { return condense_sccs(sg.graph); }

// Undirected "one reaches the other" graph, held as a directed
// reachability bit matrix.
class ReachabilityGraph {
 public:
  ReachabilityGraph() = default;
  explicit ReachabilityGraph(const Digraph& g);

  size_t size() const { return n_; }
  // u reaches v through at least one edge.
  bool reaches(VertexId u, VertexId v) const {
    return (rows_[u][v / 64] >> (v % 64)) & 1U;
  }
  bool adjacent(VertexId u, VertexId v) const {
    return u != v && (reaches(u, v) || reaches(v, u));
  }
  // Unordered pairs with first < second, sorted.
  std::vector<std::pair<VertexId, VertexId>> edges() const;

 private:
  size_t n_ = 0;
  std::vector<std::vector<uint64_t>> rows_;
};

inline ReachabilityGraph reachability_graph(const Subgraph& sg) {
  return ReachabilityGraph(sg.graph);
}

// Hop distances from `source`, -1 when farther than `max_depth` or
// unreachable. `directed == false` walks edges in both directions.
std::vector<int> hop_distances(const Digraph& g, VertexId source, int max_depth, bool directed);

}  // namespace sybil

#endif  // SYBILSCOPE_TXGRAPH_HPP_
