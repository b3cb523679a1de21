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

#include "sybilscope/dot.hpp"

#include <map>
#include <set>
#include <sstream>

namespace sybil {
namespace {

// Edges of a shortest directed walk from -> to; empty when unreachable.
std::vector<std::pair<VertexId, VertexId>> shortest_walk(const Digraph& g, VertexId from,
                                                         VertexId to) {
  if (from == to) return {};
  std::vector<long> parent(g.size(), -1);
  std::vector<VertexId> queue{from};
  parent[from] = from;
  for (size_t i = 0; i < queue.size() && parent[to] < 0; ++i) {
    for (VertexId w : g.successors(queue[i])) {
      if (parent[w] < 0) {
        parent[w] = queue[i];
        queue.push_back(w);
      }
    }
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  if (parent[to] < 0) return edges;
  for (VertexId v = to; v != from; v = static_cast<VertexId>(parent[v])) {
    edges.emplace_back(static_cast<VertexId>(parent[v]), v);
  }
  return edges;
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string short_label(const AccountId& account) {
  if (account.size() > 2 && account[0] == '0' && account[1] == 'x') {
    return account.substr(0, 10);
  }
  return account.substr(0, 8);
}

std::string to_dot(const Subgraph& sg, const PatternOverlay& overlay,
                   const std::string& graph_name) {
  const Digraph& g = sg.graph;
  std::set<VertexId> centers;
  std::set<std::pair<VertexId, VertexId>> highlighted;
  auto highlight = [&](const AccountId& a, const AccountId& b) {
    auto u = g.find(a);
    auto v = g.find(b);
    if (!u || !v) return;
    for (const auto& e : shortest_walk(g, *u, *v)) highlighted.insert(e);
  };
  for (const auto& p : overlay.sequential) {
    for (size_t i = 0; i + 1 < p.path_vertices.size(); ++i) {
      highlight(p.path_vertices[i], p.path_vertices[i + 1]);
    }
  }
  for (const auto& p : overlay.radial) {
    if (auto c = g.find(p.center)) centers.insert(*c);
    for (const auto& s : p.spokes) highlight(p.center, s);
  }

  std::ostringstream out;
  out << "digraph " << quoted(graph_name) << " {\n";
  out << "  node [shape=ellipse, fontname=\"monospace\"];\n";
  for (VertexId v = 0; v < g.size(); ++v) {
    out << "  " << quoted(g.name(v)) << " [label=" << quoted(short_label(g.name(v)));
    if (sg.seed.contains(g.name(v))) out << ", style=filled, fillcolor=\"#9ecae1\"";
    if (centers.contains(v)) out << ", shape=doublecircle, color=red";
    out << "];\n";
  }
  for (const auto& [key, agg] : g.edges()) {
    out << "  " << quoted(g.name(key.first)) << " -> " << quoted(g.name(key.second))
        << " [label=\"" << agg.tx_count << "\"";
    if (highlighted.contains(key)) out << ", color=red, penwidth=2";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::vector<DotFile> render_report_dots(const Snapshot& snapshot, const DetectConfig& config,
                                        const DetectionReport& report) {
  std::map<std::string, TransactionGraph> graphs;
  for (const auto& [chain, txs] : snapshot.transactions) {
    graphs.emplace(chain, build_graph(apply_filters(txs, snapshot.filters)));
  }
  std::vector<DotFile> out;
  for (const auto& comp : report.components) {
    for (size_t k = 0; k < comp.clusters.size(); ++k) {
      const ClusterReport& cluster = comp.clusters[k];
      if (!cluster.flagged) continue;
      std::map<std::string, PatternOverlay> by_chain;
      for (const auto& p : cluster.sequential) by_chain[p.chain].sequential.push_back(p);
      for (const auto& p : cluster.radial) by_chain[p.chain].radial.push_back(p);
      for (const auto& [chain, overlay] : by_chain) {
        auto g = graphs.find(chain);
        if (g == graphs.end()) continue;
        std::set<AccountId> seed;
        for (const auto& a : cluster.accounts) {
          if (g->second.contains(a)) seed.insert(a);
        }
        if (seed.empty()) continue;
        const Subgraph sg = extract_subgraph(g->second, seed, config.caps);
        const std::string name = "component-" + std::to_string(comp.id) + "-cluster-" +
                                 std::to_string(k) + "-" + chain;
        out.push_back({name + ".dot", to_dot(sg, overlay, name)});
      }
    }
  }
  return out;
}

}  // namespace sybil
