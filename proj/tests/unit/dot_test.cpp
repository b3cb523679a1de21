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

#include <gtest/gtest.h>

#include "sybilscope/synthgen.hpp"

namespace sybil {
namespace {

TEST(ShortLabelTest, EightCharacters) {
  EXPECT_EQ(short_label("0x7faf8b4e0123456789abcdef0123456789abcdef"), "0x7faf8b4e");
  EXPECT_EQ(short_label("abcdefghijklmnopqrstuvwxyz"), "abcdefgh");
}

TEST(ToDotTest, MarksSeedsCentresAndPatternEdges) {
  const auto g = Digraph::from_edge_list({{"t", "a"}, {"t", "b"}, {"x", "t"}});
  const Subgraph sg = extract_subgraph(g, {"a", "b"});
  PatternOverlay overlay;
  overlay.radial.push_back({"c", "t", {"a", "b"}});
  const std::string dot = to_dot(sg, overlay, "g");
  EXPECT_EQ(dot.rfind("digraph \"g\" {", 0), 0u);
  EXPECT_NE(dot.find("\"a\" [label=\"a\", style=filled"), std::string::npos);
  EXPECT_NE(dot.find("\"t\" [label=\"t\", shape=doublecircle"), std::string::npos);
  EXPECT_NE(dot.find("\"t\" -> \"a\" [label=\"1\", color=red"), std::string::npos);
  EXPECT_NE(dot.find("\"x\" -> \"t\" [label=\"1\"];"), std::string::npos);
  // Vertex lines follow address order.
  EXPECT_LT(dot.find("\"a\" [label"), dot.find("\"b\" [label"));
  EXPECT_LT(dot.find("\"b\" [label"), dot.find("\"t\" [label"));
  EXPECT_EQ(to_dot(sg, overlay, "g"), dot);
}

TEST(ToDotTest, SequentialPathHighlightsShortestWalk) {
  const auto g = Digraph::from_edge_list({{"a", "m"}, {"m", "b"}, {"a", "z"}});
  const Subgraph sg = extract_subgraph(g, {"a", "b"});
  PatternOverlay overlay;
  overlay.sequential.push_back({"c", {"a", "b"}, {"a", "b"}});
  const std::string dot = to_dot(sg, overlay);
  EXPECT_NE(dot.find("\"a\" -> \"m\" [label=\"1\", color=red"), std::string::npos);
  EXPECT_NE(dot.find("\"m\" -> \"b\" [label=\"1\", color=red"), std::string::npos);
  EXPECT_NE(dot.find("\"a\" -> \"z\" [label=\"1\"];"), std::string::npos);
}

TEST(RenderReportDotsTest, OneFilePerFlaggedClusterAndChain) {
  ScenarioConfig sc;
  sc.seed = 12;
  sc.n_radial_bots = 2;
  sc.radial_accounts = 5;
  sc.n_ordinary_users = 20;
  const Scenario s = generate(sc);
  const DetectConfig cfg;
  const auto report = detect(s.snapshot, cfg);
  const auto files = render_report_dots(s.snapshot, cfg, report);
  size_t flagged = 0;
  for (const auto& comp : report.components) {
    for (const auto& c : comp.clusters) flagged += c.flagged ? 1 : 0;
  }
  EXPECT_EQ(files.size(), flagged);
  ASSERT_FALSE(files.empty());
  for (const auto& f : files) {
    EXPECT_EQ(f.name.rfind("component-", 0), 0u);
    EXPECT_NE(f.content.find("doublecircle"), std::string::npos);
  }
  EXPECT_EQ(render_report_dots(s.snapshot, cfg, report)[0].content, files[0].content);
}

}  // namespace
}  // namespace sybil
