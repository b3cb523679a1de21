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

#include "sybilscope/run_config.hpp"

#include <fstream>

namespace sybil {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<fs::path> optional_path(const json& obj, const char* key, const fs::path& base) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw ConfigError(std::string(key) + " must be a path string");
  fs::path p = it->get<std::string>();
  return p.is_absolute() ? p : base / p;
}

std::ifstream open_or_throw(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

void collect(std::vector<std::string>& out, const fs::path& file,
             const std::vector<ParseDiagnostic>& diags) {
  for (const auto& d : diags) {
    out.push_back(file.string() + ":" + std::to_string(d.line) + ": " + d.reason);
  }
}

}  // namespace

RunConfig parse_run_config(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig rc;
  auto snap = j.find("snapshot");
  if (snap == j.end() || !snap->is_object()) throw ConfigError("missing snapshot section");
  auto txs = snap->find("transactions");
  if (txs == snap->end() || !txs->is_object()) {
    throw ConfigError("snapshot.transactions must map chain names to files");
  }
  for (const auto& [chain, file] : txs->items()) {
    if (!file.is_string()) throw ConfigError("transaction file for " + chain + " must be a string");
    fs::path p = file.get<std::string>();
    rc.sources.transactions[chain] = p.is_absolute() ? p : base_dir / p;
  }
  rc.sources.events = optional_path(*snap, "events", base_dir);
  rc.sources.contracts = optional_path(*snap, "contracts", base_dir);
  rc.sources.exchanges = optional_path(*snap, "exchanges", base_dir);
  rc.sources.whitelist = optional_path(*snap, "whitelist", base_dir);
  rc.sources.eligible = optional_path(*snap, "eligible", base_dir);

  if (auto d = j.find("detect"); d != j.end() && !d->is_null()) {
    rc.detect = DetectConfig::from_json(*d);
  }
  if (auto o = j.find("output"); o != j.end() && !o->is_null()) {
    if (!o->is_object()) throw ConfigError("output must be an object");
    rc.output.report = optional_path(*o, "report", base_dir);
    rc.output.dot_dir = optional_path(*o, "dot_dir", base_dir);
  }
  return rc;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in = open_or_throw(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_run_config(j, path.parent_path());
}

LoadedSnapshot load_snapshot(const SnapshotSources& sources) {
  LoadedSnapshot out;
  for (const auto& [chain, path] : sources.transactions) {
    std::ifstream in = open_or_throw(path);
    ParsedTransactions parsed = parse_transactions(in, chain);
    collect(out.diagnostics, path, parsed.diagnostics);
    out.snapshot.transactions[chain] = std::move(parsed.transactions);
  }
  if (sources.events) {
    std::ifstream in = open_or_throw(*sources.events);
    ParsedEvents parsed = parse_events(in);
    collect(out.diagnostics, *sources.events, parsed.diagnostics);
    out.snapshot.events = std::move(parsed.events);
  }
  auto list = [&](const std::optional<fs::path>& path) -> std::set<AccountId> {
    if (!path) return {};
    std::vector<ParseDiagnostic> diags;
    auto s = read_address_list_file(path->string(), &diags);
    collect(out.diagnostics, *path, diags);
    return s;
  };
  out.snapshot.filters.contract_addresses = list(sources.contracts);
  out.snapshot.filters.exchange_addresses = list(sources.exchanges);
  out.snapshot.filters.whitelist = list(sources.whitelist);
  if (sources.eligible) out.snapshot.eligible = list(sources.eligible);
  return out;
}

}  // namespace sybil
