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

#include "sybilscope/patterns.hpp"

#include <algorithm>
#include <stdexcept>

namespace sybil {
namespace {

constexpr int kUnweighted = -1;

std::vector<VertexId> seed_ids(const Subgraph& sg, const std::set<AccountId>& seed) {
  std::vector<VertexId> ids;
  ids.reserve(seed.size());
  for (const auto& s : seed) {
    auto id = sg.graph.find(s);
    if (!id) throw std::invalid_argument("seed account not in subgraph: " + s);
    ids.push_back(*id);
  }
  return ids;
}

// Vertices at directed distance 1 or 2 from each vertex.
std::vector<std::vector<VertexId>> two_hop_out(const Digraph& g) {
  std::vector<std::vector<VertexId>> out(g.size());
  for (VertexId v = 0; v < g.size(); ++v) {
    auto& reach = out[v];
    for (VertexId w : g.successors(v)) {
      reach.push_back(w);
      for (VertexId x : g.successors(w)) reach.push_back(x);
    }
    std::sort(reach.begin(), reach.end());
    reach.erase(std::unique(reach.begin(), reach.end()), reach.end());
    std::erase(reach, v);
  }
  return out;
}

}  // namespace

SeedChain max_seed_chain(const CondensationDag& cond, std::span<const VertexId> seed) {
  const size_t k = cond.sccs.size();
  std::vector<size_t> weight(k, 0);
  for (VertexId v : seed) ++weight[cond.vertex_to_scc[v]];

  // Dense numbering of the weighted SCCs for the closure bitsets.
  std::vector<int> slot(k, kUnweighted);
  std::vector<SccIndex> weighted;
  for (SccIndex s = 0; s < k; ++s) {
    if (weight[s] > 0) {
      slot[s] = static_cast<int>(weighted.size());
      weighted.push_back(s);
    }
  }
  if (weighted.empty()) return {};

  const size_t words = (weighted.size() + 63) / 64;
  std::vector<std::vector<uint64_t>> reach(k, std::vector<uint64_t>(words, 0));

  struct Best {
    size_t weight = 0;
    size_t vertices = 0;
    int next = -1;                  // SCC index of the successor in the chain
    std::vector<VertexId> flat;     // chain vertices, for lexicographic ties
  };
  std::vector<Best> best(k);

  auto better = [&](SccIndex a, SccIndex b) {
    const Best& x = best[a];
    const Best& y = best[b];
    if (x.weight != y.weight) return x.weight > y.weight;
    if (x.vertices != y.vertices) return x.vertices < y.vertices;
    // Vertex ids follow address order, so id order is address order.
    return x.flat < y.flat;
  };

  for (auto it = cond.topo_order.rbegin(); it != cond.topo_order.rend(); ++it) {
    const SccIndex s = *it;
    auto& row = reach[s];
    for (SccIndex d : cond.successors[s]) {
      for (size_t w = 0; w < words; ++w) row[w] |= reach[d][w];
      if (slot[d] != kUnweighted) row[slot[d] / 64] |= uint64_t{1} << (slot[d] % 64);
    }
    if (weight[s] == 0) continue;

    int next = -1;
    for (size_t j = 0; j < weighted.size(); ++j) {
      if (!((row[j / 64] >> (j % 64)) & 1U)) continue;
      const SccIndex t = weighted[j];
      if (next < 0 || better(t, static_cast<SccIndex>(next))) next = static_cast<int>(t);
    }
    Best& b = best[s];
    b.weight = weight[s];
    b.vertices = cond.sccs[s].size();
    b.flat = cond.sccs[s];
    b.next = next;
    if (next >= 0) {
      const Best& tail = best[static_cast<size_t>(next)];
      b.weight += tail.weight;
      b.vertices += tail.vertices;
      b.flat.insert(b.flat.end(), tail.flat.begin(), tail.flat.end());
    }
  }

  SccIndex head = weighted.front();
  for (SccIndex s : weighted) {
    if (better(s, head)) head = s;
  }
  SeedChain out;
  out.weight = best[head].weight;
  for (int s = static_cast<int>(head); s >= 0; s = best[static_cast<size_t>(s)].next) {
    out.chain.push_back(static_cast<SccIndex>(s));
  }
  return out;
}

std::vector<VertexId> chain_vertices(const CondensationDag& cond, const SeedChain& chain) {
  std::vector<VertexId> out;
  for (SccIndex s : chain.chain) out.insert(out.end(), cond.sccs[s].begin(), cond.sccs[s].end());
  return out;
}

std::vector<SequentialPattern> search_sequential(const Subgraph& sg,
                                                 const std::set<AccountId>& seed) {
  std::vector<VertexId> remaining = seed_ids(sg, seed);
  const CondensationDag cond = condense_sccs(sg.graph);
  std::vector<SequentialPattern> out;
  while (remaining.size() > 2) {
    SeedChain best = max_seed_chain(cond, remaining);
    if (best.weight <= 2) break;
    SequentialPattern p;
    std::vector<VertexId> path = chain_vertices(cond, best);
    for (VertexId v : path) p.path_vertices.push_back(sg.graph.name(v));
    std::vector<VertexId> kept;
    for (VertexId v : remaining) {
      if (std::find(path.begin(), path.end(), v) != path.end()) {
        p.covered_seed.insert(sg.graph.name(v));
      } else {
        kept.push_back(v);
      }
    }
    remaining = std::move(kept);
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<RadialPattern> search_radial(const Subgraph& sg, const std::set<AccountId>& seed) {
  const Digraph& g = sg.graph;
  std::vector<VertexId> ids = seed_ids(sg, seed);
  std::vector<char> remaining(g.size(), 0);
  size_t remaining_count = ids.size();
  for (VertexId v : ids) remaining[v] = 1;

  const auto reach2 = two_hop_out(g);
  std::vector<RadialPattern> out;
  std::vector<int> dist(g.size());
  std::vector<VertexId> queue;
  while (remaining_count > 0) {
    // Candidate centres: undirected distance <= 2 from the remaining seeds.
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    for (VertexId v = 0; v < g.size(); ++v) {
      if (remaining[v]) {
        dist[v] = 0;
        queue.push_back(v);
      }
    }
    for (size_t i = 0; i < queue.size(); ++i) {
      VertexId v = queue[i];
      if (dist[v] >= 2) continue;
      auto visit = [&](VertexId w) {
        if (dist[w] == -1) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
      };
      for (VertexId w : g.successors(v)) visit(w);
      for (VertexId w : g.predecessors(v)) visit(w);
    }

    VertexId center = 0;
    size_t best = 0;
    for (VertexId v = 0; v < g.size(); ++v) {
      if (dist[v] < 0) continue;
      size_t count = 0;
      for (VertexId u : reach2[v]) count += remaining[u] ? 1 : 0;
      if (count > best) {
        best = count;
        center = v;
      }
    }
    if (best < 2) break;

    RadialPattern p;
    p.center = g.name(center);
    for (VertexId u : reach2[center]) {
      if (remaining[u]) {
        p.spokes.insert(g.name(u));
        remaining[u] = 0;
        --remaining_count;
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::string to_string(ComplexOrder order) {
  return order == ComplexOrder::kRadialFirst ? "radial_first" : "sequential_first";
}

ComplexOrder complex_order_from_string(const std::string& s) {
  if (s == "radial_first") return ComplexOrder::kRadialFirst;
  if (s == "sequential_first") return ComplexOrder::kSequentialFirst;
  throw std::invalid_argument("unknown complex pattern order: " + s);
}

std::vector<ComplexPattern> search_complex(const Subgraph& sg, const std::set<AccountId>& seed,
                                           ComplexOrder order) {
  std::vector<ComplexPattern> out;
  if (seed.empty()) return out;
  if (order == ComplexOrder::kRadialFirst) {
    auto radial = search_radial(sg, seed);
    if (radial.empty()) return out;
    std::set<AccountId> centers;
    for (const auto& r : radial) centers.insert(r.center);
    ComplexPattern p;
    p.order = order;
    p.sequential = search_sequential(sg, centers);
    p.radial = std::move(radial);
    p.join_vertices.assign(centers.begin(), centers.end());
    out.push_back(std::move(p));
    return out;
  }
  for (auto& s : search_sequential(sg, seed)) {
    std::set<AccountId> members(s.path_vertices.begin(), s.path_vertices.end());
    ComplexPattern p;
    p.order = order;
    p.radial = search_radial(sg, members);
    p.join_vertices.assign(members.begin(), members.end());
    p.sequential.push_back(std::move(s));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace sybil
