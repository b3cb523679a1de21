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

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace sybil {

std::optional<VertexId> Digraph::find(std::string_view account) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), account,
                             [](const AccountId& a, std::string_view b) { return a < b; });
  if (it == names_.end() || *it != account) return std::nullopt;
  return static_cast<VertexId>(it - names_.begin());
}

const EdgeAggregate* Digraph::edge(VertexId from, VertexId to) const {
  auto it = edges_.find({from, to});
  return it == edges_.end() ? nullptr : &it->second;
}

Digraph Digraph::from_edge_list(const std::vector<std::pair<AccountId, AccountId>>& edges,
                                const std::vector<AccountId>& extra_vertices) {
  DigraphBuilder b;
  for (const auto& v : extra_vertices) b.add_vertex(v);
  for (const auto& [from, to] : edges) b.add_transfer(from, to, Amount{}, 0);
  return std::move(b).build();
}

void DigraphBuilder::add_vertex(const AccountId& account) { vertices_.insert(account); }

void DigraphBuilder::add_transfer(const AccountId& from, const AccountId& to,
                                  const Amount& amount, int64_t timestamp) {
  vertices_.insert(from);
  vertices_.insert(to);
  if (from == to) return;
  auto [it, inserted] = edges_.try_emplace({from, to});
  EdgeAggregate& agg = it->second;
  if (inserted) {
    agg.first_ts = agg.last_ts = timestamp;
  } else {
    agg.first_ts = std::min(agg.first_ts, timestamp);
    agg.last_ts = std::max(agg.last_ts, timestamp);
  }
  agg.tx_count += 1;
  agg.total_amount += amount;
}

void DigraphBuilder::add_edge(const AccountId& from, const AccountId& to,
                              const EdgeAggregate& agg) {
  vertices_.insert(from);
  vertices_.insert(to);
  if (from != to) edges_[{from, to}] = agg;
}

Digraph DigraphBuilder::build() && {
  Digraph g;
  g.names_.assign(vertices_.begin(), vertices_.end());
  g.out_.resize(g.names_.size());
  g.in_.resize(g.names_.size());
  for (auto& [key, agg] : edges_) {
    VertexId u = *g.find(key.first);
    VertexId v = *g.find(key.second);
    g.edges_.emplace(std::make_pair(u, v), agg);
  }
  // edges_ iterates (u, v) ascending, so adjacency lists come out sorted.
  for (const auto& [key, agg] : g.edges_) {
    g.out_[key.first].push_back(key.second);
    g.in_[key.second].push_back(key.first);
  }
  for (auto& preds : g.in_) std::sort(preds.begin(), preds.end());
  return g;
}

TransactionGraph build_graph(std::span<const Transaction> txs) {
  DigraphBuilder b;
  for (const auto& tx : txs) b.add_transfer(tx.from.value, tx.to.value, tx.amount, tx.timestamp);
  return std::move(b).build();
}

std::vector<std::vector<AccountId>> connected_components(const Digraph& g) {
  const size_t n = g.size();
  std::vector<int> comp(n, -1);
  std::vector<std::vector<AccountId>> out;
  // Scanning ids in ascending order starts each component at its smallest
  // member, so the output order is by smallest member.
  for (VertexId s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    const int id = static_cast<int>(out.size());
    std::vector<VertexId> members{s};
    comp[s] = id;
    for (size_t i = 0; i < members.size(); ++i) {
      VertexId v = members[i];
      auto visit = [&](VertexId w) {
        if (comp[w] == -1) {
          comp[w] = id;
          members.push_back(w);
        }
      };
      for (VertexId w : g.successors(v)) visit(w);
      for (VertexId w : g.predecessors(v)) visit(w);
    }
    std::sort(members.begin(), members.end());
    std::vector<AccountId> names;
    names.reserve(members.size());
    for (VertexId v : members) names.push_back(g.name(v));
    out.push_back(std::move(names));
  }
  return out;
}

std::vector<VertexId> Subgraph::seed_ids() const {
  std::vector<VertexId> ids;
  ids.reserve(seed.size());
  for (const auto& s : seed) ids.push_back(*graph.find(s));
  return ids;
}

Subgraph extract_subgraph(const Digraph& g, const std::set<AccountId>& seed,
                          const SubgraphCaps& caps) {
  if (seed.empty()) throw std::invalid_argument("empty seed set");
  const size_t n = g.size();
  std::vector<int> dist(n, -1);
  std::deque<VertexId> frontier;
  for (const auto& s : seed) {
    auto id = g.find(s);
    if (!id) throw std::invalid_argument("seed account not in graph: " + s);
    dist[*id] = 0;
    frontier.push_back(*id);
  }
  auto is_hub = [&](VertexId v) { return g.degree(v) > caps.hub_degree_threshold; };
  while (!frontier.empty()) {
    VertexId v = frontier.front();
    frontier.pop_front();
    if (dist[v] >= 2 || is_hub(v)) continue;
    auto visit = [&](VertexId w) {
      if (dist[w] != -1 || is_hub(w)) return;
      dist[w] = dist[v] + 1;
      frontier.push_back(w);
    };
    for (VertexId w : g.successors(v)) visit(w);
    for (VertexId w : g.predecessors(v)) visit(w);
  }

  std::vector<VertexId> extra;
  for (VertexId v = 0; v < n; ++v) {
    if (dist[v] > 0) extra.push_back(v);
  }
  // Ids follow address order, so (distance, id) is (distance, address).
  std::stable_sort(extra.begin(), extra.end(),
                   [&](VertexId a, VertexId b) { return dist[a] < dist[b]; });
  const size_t budget = caps.max_vertices > seed.size() ? caps.max_vertices - seed.size() : 0;
  if (extra.size() > budget) extra.resize(budget);

  std::vector<char> keep(n, 0);
  for (const auto& s : seed) keep[*g.find(s)] = 1;
  for (VertexId v : extra) keep[v] = 1;

  DigraphBuilder b;
  for (VertexId v = 0; v < n; ++v) {
    if (keep[v]) b.add_vertex(g.name(v));
  }
  for (const auto& [key, agg] : g.edges()) {
    if (keep[key.first] && keep[key.second]) b.add_edge(g.name(key.first), g.name(key.second), agg);
  }

  Subgraph sg;
  sg.seed = seed;
  sg.graph = std::move(b).build();
  sg.distance.resize(sg.graph.size());
  for (VertexId v = 0; v < sg.graph.size(); ++v) sg.distance[v] = dist[*g.find(sg.graph.name(v))];
  return sg;
}

CondensationDag condense_sccs(const Digraph& g) {
  const size_t n = g.size();
  constexpr int kUnvisited = -1;
  std::vector<int> index(n, kUnvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<VertexId> stack;
  std::vector<std::vector<VertexId>> raw_sccs;
  int counter = 0;

  // Iterative Tarjan: (vertex, next successor position).
  std::vector<std::pair<VertexId, size_t>> call;
  for (VertexId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      auto succ = g.successors(v);
      if (pos < succ.size()) {
        VertexId w = succ[pos++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const VertexId done = v;
      call.pop_back();
      if (!call.empty()) {
        VertexId parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        std::vector<VertexId> members;
        VertexId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          members.push_back(w);
        } while (w != done);
        std::sort(members.begin(), members.end());
        raw_sccs.push_back(std::move(members));
      }
    }
  }

  CondensationDag dag;
  std::sort(raw_sccs.begin(), raw_sccs.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  dag.sccs = std::move(raw_sccs);
  dag.vertex_to_scc.assign(n, 0);
  for (SccIndex c = 0; c < dag.sccs.size(); ++c) {
    for (VertexId v : dag.sccs[c]) dag.vertex_to_scc[v] = c;
  }
  for (const auto& [key, agg] : g.edges()) {
    SccIndex a = dag.vertex_to_scc[key.first];
    SccIndex b = dag.vertex_to_scc[key.second];
    if (a != b) dag.dag_edges.emplace(a, b);
  }
  const size_t k = dag.sccs.size();
  dag.successors.resize(k);
  std::vector<size_t> indegree(k, 0);
  for (const auto& [a, b] : dag.dag_edges) {
    dag.successors[a].push_back(b);
    ++indegree[b];
  }
  std::priority_queue<SccIndex, std::vector<SccIndex>, std::greater<>> ready;
  for (SccIndex c = 0; c < k; ++c) {
    if (indegree[c] == 0) ready.push(c);
  }
  while (!ready.empty()) {
    SccIndex c = ready.top();
    ready.pop();
    dag.topo_order.push_back(c);
    for (SccIndex d : dag.successors[c]) {
      if (--indegree[d] == 0) ready.push(d);
    }
  }
  return dag;
}

ReachabilityGraph::ReachabilityGraph(const Digraph& g) : n_(g.size()) {
  const size_t words = (n_ + 63) / 64;
  rows_.assign(n_, std::vector<uint64_t>(words, 0));
  std::vector<VertexId> queue;
  std::vector<char> seen(n_, 0);
  for (VertexId s = 0; s < n_; ++s) {
    std::fill(seen.begin(), seen.end(), 0);
    queue.clear();
    for (VertexId w : g.successors(s)) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
    for (size_t i = 0; i < queue.size(); ++i) {
      for (VertexId w : g.successors(queue[i])) {
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
      }
    }
    for (VertexId v : queue) rows_[s][v / 64] |= uint64_t{1} << (v % 64);
  }
}

std::vector<std::pair<VertexId, VertexId>> ReachabilityGraph::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (VertexId u = 0; u < n_; ++u) {
    for (VertexId v = u + 1; v < n_; ++v) {
      if (adjacent(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

std::vector<int> hop_distances(const Digraph& g, VertexId source, int max_depth, bool directed) {
  std::vector<int> dist(g.size(), -1);
  dist[source] = 0;
  std::vector<VertexId> queue{source};
  for (size_t i = 0; i < queue.size(); ++i) {
    VertexId v = queue[i];
    if (dist[v] >= max_depth) continue;
    auto visit = [&](VertexId w) {
      if (dist[w] == -1) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    };
    for (VertexId w : g.successors(v)) visit(w);
    if (!directed) {
      for (VertexId w : g.predecessors(v)) visit(w);
    }
  }
  return dist;
}

}  // namespace sybil
