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

// Token-transfer pattern search over a cluster-centred subgraph.
//
// Sequential patterns: a walk that visits many cluster accounts exists iff
// those accounts form a clique in the reachability graph. The reachability
// graph of a digraph is the comparability graph of its SCC condensation,
// so the largest such clique is the maximum-weight chain of the
// condensation DAG with weight |scc ∩ seed|, found exactly by dynamic
// programming instead of a general clique search.
//
// Radial patterns: a centre that reaches many cluster accounts within two
// directed hops.

#ifndef SYBILSCOPE_PATTERNS_HPP_
#define SYBILSCOPE_PATTERNS_HPP_

#include <set>
#include <span>
#include <string>
#include <vector>

#include "sybilscope/txgraph.hpp"

namespace sybil {

struct SeedChain {
  std::vector<SccIndex> chain;  // each SCC reaches the next
  size_t weight = 0;            // seeds covered
};

// Maximum-weight chain of the condensation under w(scc) = |scc ∩ seed|.
// Only positively weighted SCCs appear in the chain. Among equal weights
// the chain with fewer vertices wins, then the lexicographically smallest
// vertex sequence.
SeedChain max_seed_chain(const CondensationDag& cond, std::span<const VertexId> seed);

// Member vertices of the chain's SCCs in chain order.
std::vector<VertexId> chain_vertices(const CondensationDag& cond, const SeedChain& chain);

struct SequentialPattern {
  std::string chain;
  std::vector<AccountId> path_vertices;
  std::set<AccountId> covered_seed;

  friend bool operator==(const SequentialPattern&, const SequentialPattern&) = default;
};

struct RadialPattern {
  std::string chain;
  AccountId center;
  std::set<AccountId> spokes;

  friend bool operator==(const RadialPattern&, const RadialPattern&) = default;
};

enum class ComplexOrder { kRadialFirst, kSequentialFirst };

std::string to_string(ComplexOrder order);
ComplexOrder complex_order_from_string(const std::string& s);

struct ComplexPattern {
  std::string chain;
  ComplexOrder order = ComplexOrder::kRadialFirst;
  // Radial-first: every radial pattern, then the sequential patterns over
  // their centres. Sequential-first: one sequential pattern, then the
  // radial patterns over its path vertices.
  std::vector<RadialPattern> radial;
  std::vector<SequentialPattern> sequential;
  std::vector<AccountId> join_vertices;  // stage-two seed set

  bool linked() const {
    return order == ComplexOrder::kRadialFirst ? !sequential.empty() : !radial.empty();
  }

  friend bool operator==(const ComplexPattern&, const ComplexPattern&) = default;
};

// Greedy: repeatedly take the maximum-weight chain over the remaining
// seeds, stop once it covers two seeds or fewer. Throws
// std::invalid_argument if a seed is not a subgraph vertex.
std::vector<SequentialPattern> search_sequential(const Subgraph& sg,
                                                 const std::set<AccountId>& seed);

// Greedy: among vertices within undirected distance 2 of the remaining
// seeds, pick the one reaching the most remaining seeds within two
// directed hops (smallest address on ties); stop when it reaches fewer
// than two.
std::vector<RadialPattern> search_radial(const Subgraph& sg, const std::set<AccountId>& seed);

std::vector<ComplexPattern> search_complex(const Subgraph& sg, const std::set<AccountId>& seed,
                                           ComplexOrder order);

}  // namespace sybil

#endif  // SYBILSCOPE_PATTERNS_HPP_
