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

#ifndef SYBILSCOPE_DOT_HPP_
#define SYBILSCOPE_DOT_HPP_

#include <string>
#include <vector>

#include "sybilscope/patterns.hpp"
#include "sybilscope/pipeline.hpp"
#include "sybilscope/txgraph.hpp"

namespace sybil {

struct PatternOverlay {
  std::vector<SequentialPattern> sequential;
  std::vector<RadialPattern> radial;
};

// "0x" plus the first 8 characters of the address body.
std::string short_label(const AccountId& account);

// Graphviz rendering with vertices and edges in id order. Seed vertices
// are filled, radial centres drawn as double circles, and edges on a
// shortest walk realizing each pattern are drawn bold red.
std::string to_dot(const Subgraph& sg, const PatternOverlay& overlay = {},
                   const std::string& graph_name = "subgraph");

struct DotFile {
  std::string name;
  std::string content;
};

// One rendering per (flagged cluster, chain) carrying at least one pattern,
// named component-<id>-cluster-<k>-<chain>.dot. The subgraphs are rebuilt
// from the snapshot with the config's filters and caps.
std::vector<DotFile> render_report_dots(const Snapshot& snapshot, const DetectConfig& config,
                                        const DetectionReport& report);

}  // namespace sybil

#endif  // SYBILSCOPE_DOT_HPP_
