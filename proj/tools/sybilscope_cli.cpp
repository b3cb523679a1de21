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

// sybilscope detect|simulate|evaluate|export-dot
//
// Exit codes: 0 success, 1 I/O failure, 2 bad configuration or input.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sybilscope/dot.hpp"
#include "sybilscope/run_config.hpp"
#include "sybilscope/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kIoFailure = 1;
constexpr int kBadInput = 2;

struct Overrides {
  std::vector<std::string> chains;
  std::optional<double> eps;
  std::optional<size_t> min_pts;
  std::optional<std::string> match_mode;
  std::optional<size_t> jobs;
};

void apply(const Overrides& o, sybil::DetectConfig& cfg) {
  if (!o.chains.empty()) cfg.chains = o.chains;
  if (o.eps || o.min_pts) {
    sybil::ClusterParams p = cfg.cluster.value_or(sybil::ClusterParams{});
    if (o.eps) p.eps = *o.eps;
    if (o.min_pts) p.min_pts = *o.min_pts;
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw sybil::ConfigError(e.what());
    }
    cfg.cluster = p;
  }
  if (o.match_mode) {
    if (*o.match_mode == "type") {
      cfg.match = sybil::MatchMode::type_only();
    } else if (*o.match_mode == "type_and_amount") {
      cfg.match = sybil::MatchMode::type_and_amount(cfg.match.delta);
    } else {
      throw sybil::ConfigError("unknown match mode: " + *o.match_mode);
    }
  }
  if (o.jobs) cfg.jobs = *o.jobs;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw sybil::IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw sybil::ConfigError(path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw sybil::IoError("cannot write " + path.string());
  out << text;
  if (!out) throw sybil::IoError("write failed: " + path.string());
}

sybil::Snapshot load(const sybil::RunConfig& rc) {
  sybil::LoadedSnapshot loaded = sybil::load_snapshot(rc.sources);
  for (const auto& d : loaded.diagnostics) std::cerr << "warning: " << d << "\n";
  return std::move(loaded.snapshot);
}

void write_dots(const sybil::Snapshot& snap, const sybil::DetectConfig& cfg,
                const sybil::DetectionReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& f : sybil::render_report_dots(snap, cfg, report)) {
    write_text(dir / f.name, f.content);
  }
}

// Runs body and maps the error taxonomy onto exit codes.
template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const sybil::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kBadInput;
  } catch (const sybil::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sybil operator detection over transfer and activity snapshots"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path;
  std::string out_path;
  std::string dot_dir;

  auto* detect = app.add_subcommand("detect", "run detection and write a report");
  detect->add_option("--config", config_path, "run config JSON")->required();
  detect->add_option("--out", out_path, "report path (overrides output.report)");
  detect->add_option("--dot-dir", dot_dir, "write DOT exports here");
  detect->add_option("--chain", ov.chains, "restrict pattern search to chain (repeatable)");
  detect->add_option("--eps", ov.eps, "DBSCAN radius");
  detect->add_option("--min-pts", ov.min_pts, "DBSCAN core threshold");
  detect->add_option("--match-mode", ov.match_mode, "type | type_and_amount");
  detect->add_option("--jobs", ov.jobs, "worker threads")->check(CLI::PositiveNumber);

  std::optional<uint64_t> seed;
  auto* simulate = app.add_subcommand("simulate", "generate a labeled synthetic snapshot");
  simulate->add_option("--config", config_path, "scenario JSON")->required();
  simulate->add_option("--out", out_path, "output directory")->required();
  simulate->add_option("--seed", seed, "override the scenario seed");

  std::string report_path;
  std::string truth_path;
  auto* evaluate = app.add_subcommand("evaluate", "score a report against ground truth");
  evaluate->add_option("report", report_path)->required();
  evaluate->add_option("truth", truth_path)->required();

  auto* export_dot = app.add_subcommand("export-dot", "render flagged clusters as DOT");
  export_dot->add_option("--config", config_path, "run config JSON")->required();
  export_dot->add_option("--report", report_path, "report JSON")->required();
  export_dot->add_option("--out", out_path, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadInput;
  }

  if (*detect) {
    return guarded([&] {
      sybil::RunConfig rc = sybil::load_run_config(config_path);
      apply(ov, rc.detect);
      if (!out_path.empty()) rc.output.report = out_path;
      if (!dot_dir.empty()) rc.output.dot_dir = dot_dir;
      const sybil::Snapshot snap = load(rc);
      const sybil::DetectionReport report = sybil::detect(snap, rc.detect);
      const std::string text = sybil::report_to_json(report).dump(2) + "\n";
      if (rc.output.report) {
        write_text(*rc.output.report, text);
      } else {
        std::cout << text;
      }
      if (rc.output.dot_dir) write_dots(snap, rc.detect, report, *rc.output.dot_dir);
      std::cerr << report.flagged_accounts.size() << " flagged accounts in "
                << report.components.size() << " of " << report.total_components
                << " components\n";
      return kOk;
    });
  }
  if (*simulate) {
    return guarded([&] {
      sybil::ScenarioConfig sc = sybil::ScenarioConfig::from_json(read_json(config_path));
      if (seed) sc.seed = *seed;
      sybil::write_scenario(sybil::generate(sc), out_path);
      return kOk;
    });
  }
  if (*evaluate) {
    return guarded([&] {
      const sybil::DetectionReport report = sybil::report_from_json(read_json(report_path));
      const sybil::GroundTruth truth = sybil::GroundTruth::from_json(read_json(truth_path));
      if (report.snapshot_id != truth.snapshot_id) {
        std::cerr << "snapshot mismatch: report " << report.snapshot_id << ", truth "
                  << truth.snapshot_id << "\n";
        return kBadInput;
      }
      std::cout << sybil::evaluate(report, truth).to_json().dump(2) << "\n";
      return kOk;
    });
  }
  return guarded([&] {
    const sybil::RunConfig rc = sybil::load_run_config(config_path);
    const sybil::Snapshot snap = load(rc);
    const sybil::DetectionReport report = sybil::report_from_json(read_json(report_path));
    if (report.snapshot_id != snap.id()) {
      throw sybil::ConfigError("report was produced from a different snapshot");
    }
    write_dots(snap, rc.detect, report, out_path);
    return kOk;
  });
}
