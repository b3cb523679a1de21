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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "sybilscope/activity.hpp"
#include "sybilscope/cluster.hpp"
#include "sybilscope/patterns.hpp"
#include "sybilscope/pipeline.hpp"
#include "sybilscope/run_config.hpp"
#include "sybilscope/synthgen.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

// An activity is either a bare type or a (type, amount) pair.
using PyActivity = std::variant<std::string, std::pair<std::string, std::string>>;

sybil::ActivitySequence to_sequence(const std::vector<PyActivity>& items) {
  sybil::ActivitySequence seq;
  int64_t ts = 0;
  for (const auto& item : items) {
    sybil::Activity a;
    a.timestamp = ts++;
    if (const auto* t = std::get_if<std::string>(&item)) {
      a.type = *t;
    } else {
      const auto& [type, amount] = std::get<std::pair<std::string, std::string>>(item);
      a.type = type;
      a.params.amount = sybil::Amount::parse(amount);
    }
    seq.items.push_back(std::move(a));
  }
  return seq;
}

sybil::MatchMode to_mode(const std::string& mode, double delta) {
  if (mode == "type") return sybil::MatchMode::type_only();
  if (mode == "type_and_amount") return sybil::MatchMode::type_and_amount(delta);
  throw std::invalid_argument("unknown match mode: " + mode);
}

sybil::DistanceMatrix to_matrix(const std::vector<std::vector<double>>& rows) {
  sybil::DistanceMatrix d(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw std::invalid_argument("distance matrix must be square");
    for (size_t j = i + 1; j < rows.size(); ++j) d.set(i, j, rows[i][j]);
  }
  return d;
}

sybil::Subgraph to_subgraph(const std::vector<std::pair<std::string, std::string>>& edges,
                            const std::set<std::string>& seed) {
  sybil::Digraph g = sybil::Digraph::from_edge_list(
      edges, std::vector<std::string>(seed.begin(), seed.end()));
  return sybil::extract_subgraph(g, seed);
}

py::dict sequential_dict(const sybil::SequentialPattern& p) {
  py::dict d;
  d["path"] = p.path_vertices;
  d["covered"] = p.covered_seed;
  return d;
}

py::dict radial_dict(const sybil::RadialPattern& p) {
  py::dict d;
  d["center"] = p.center;
  d["spokes"] = p.spokes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sybilscope, m) {
  m.doc() = "Sybil operator detection core";

  py::register_exception<sybil::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<sybil::IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "seq_sim",
      [](const std::vector<PyActivity>& a, const std::vector<PyActivity>& b,
         const std::string& mode, double delta) {
        return sybil::seq_sim(to_sequence(a), to_sequence(b), to_mode(mode, delta));
      },
      py::arg("a"), py::arg("b"), py::arg("mode") = "type",
      py::arg("delta") = sybil::MatchMode::kDefaultDelta);

  m.def(
      "pair_count",
      [](const std::vector<PyActivity>& a, const std::string& mode, double delta) {
        return sybil::pair_set(to_sequence(a), to_mode(mode, delta)).size();
      },
      py::arg("a"), py::arg("mode") = "type", py::arg("delta") = sybil::MatchMode::kDefaultDelta);

  m.def(
      "dbscan",
      [](const std::vector<std::string>& accounts, const std::vector<std::vector<double>>& dist,
         double eps, size_t min_pts) {
        if (accounts.size() != dist.size()) {
          throw std::invalid_argument("one distance row per account");
        }
        const sybil::ClusterParams params{eps, min_pts};
        params.validate();
        const sybil::Clustering c = sybil::dbscan(accounts, to_matrix(dist), params);
        return py::make_tuple(c.clusters, c.noise);
      },
      py::arg("accounts"), py::arg("dist"), py::arg("eps"), py::arg("min_pts"));

  m.def(
      "silhouette",
      [](const std::vector<int>& labels, const std::vector<std::vector<double>>& dist) {
        if (labels.size() != dist.size()) throw std::invalid_argument("one label per row");
        return sybil::silhouette(labels, to_matrix(dist));
      },
      py::arg("labels"), py::arg("dist"));

  m.def(
      "search_sequential",
      [](const std::vector<std::pair<std::string, std::string>>& edges,
         const std::set<std::string>& seed) {
        py::list out;
        for (const auto& p : sybil::search_sequential(to_subgraph(edges, seed), seed)) {
          out.append(sequential_dict(p));
        }
        return out;
      },
      py::arg("edges"), py::arg("seed"));

  m.def(
      "search_radial",
      [](const std::vector<std::pair<std::string, std::string>>& edges,
         const std::set<std::string>& seed) {
        py::list out;
        for (const auto& p : sybil::search_radial(to_subgraph(edges, seed), seed)) {
          out.append(radial_dict(p));
        }
        return out;
      },
      py::arg("edges"), py::arg("seed"));

  m.def(
      "search_complex",
      [](const std::vector<std::pair<std::string, std::string>>& edges,
         const std::set<std::string>& seed, const std::string& order) {
        py::list out;
        const auto sg = to_subgraph(edges, seed);
        for (const auto& p : sybil::search_complex(sg, seed, sybil::complex_order_from_string(order))) {
          py::dict d;
          d["order"] = sybil::to_string(p.order);
          py::list radial, sequential;
          for (const auto& r : p.radial) radial.append(radial_dict(r));
          for (const auto& s : p.sequential) sequential.append(sequential_dict(s));
          d["radial"] = radial;
          d["sequential"] = sequential;
          d["join"] = p.join_vertices;
          out.append(d);
        }
        return out;
      },
      py::arg("edges"), py::arg("seed"), py::arg("order") = "radial_first");

  py::class_<sybil::Snapshot>(m, "Snapshot")
      .def_property_readonly("id", &sybil::Snapshot::id)
      .def_property_readonly("chains",
                             [](const sybil::Snapshot& s) {
                               std::vector<std::string> out;
                               for (const auto& [chain, _] : s.transactions) out.push_back(chain);
                               return out;
                             })
      .def_property_readonly("transaction_count", [](const sybil::Snapshot& s) {
        size_t n = 0;
        for (const auto& [_, txs] : s.transactions) n += txs.size();
        return n;
      });

  m.def(
      "generate",
      [](const std::string& scenario_json) {
        sybil::Scenario sc = sybil::generate(sybil::ScenarioConfig::from_json(json::parse(scenario_json)));
        return py::make_tuple(std::move(sc.snapshot), sc.truth.to_json().dump());
      },
      py::arg("scenario_json"), "Returns (Snapshot, truth JSON text).");

  m.def(
      "simulate",
      [](const std::string& scenario_json, const std::string& out_dir) {
        sybil::write_scenario(
            sybil::generate(sybil::ScenarioConfig::from_json(json::parse(scenario_json))),
            std::filesystem::path(out_dir));
      },
      py::arg("scenario_json"), py::arg("out_dir"));

  m.def(
      "load",
      [](const std::string& config_path) {
        sybil::RunConfig rc = sybil::load_run_config(config_path);
        sybil::LoadedSnapshot loaded = sybil::load_snapshot(rc.sources);
        return py::make_tuple(std::move(loaded.snapshot), rc.detect.to_json().dump(),
                              loaded.diagnostics);
      },
      py::arg("config_path"), "Returns (Snapshot, detect config JSON text, diagnostics).");

  m.def(
      "detect",
      [](const sybil::Snapshot& snapshot, const std::string& config_json) {
        const sybil::DetectConfig cfg = sybil::DetectConfig::from_json(json::parse(config_json));
        sybil::DetectionReport report;
        {
          py::gil_scoped_release release;
          report = sybil::detect(snapshot, cfg);
        }
        return sybil::report_to_json(report).dump();
      },
      py::arg("snapshot"), py::arg("config_json") = "{}");

  m.def(
      "evaluate",
      [](const std::string& report_json, const std::string& truth_json) {
        const auto report = sybil::report_from_json(json::parse(report_json));
        const auto truth = sybil::GroundTruth::from_json(json::parse(truth_json));
        return sybil::evaluate(report, truth).to_json().dump();
      },
      py::arg("report_json"), py::arg("truth_json"));
}
