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

#include "sybilscope/activity.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <string_view>
#include <unordered_map>

#include "json.hpp"

namespace sybil {
namespace {

using nlohmann::json;

constexpr double kZeroGuard = 1e-12;

struct RecordError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string require_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) throw RecordError(std::string("missing field ") + key);
  if (!it->is_string()) throw RecordError(std::string("field ") + key + " is not a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw RecordError(std::string("field ") + key + " is not a string");
  return it->get<std::string>();
}

// Kuhn's augmenting-path matching; `adj[i]` lists right vertices matchable
// with left vertex i.
size_t max_matching(const std::vector<std::vector<size_t>>& adj, size_t right_size) {
  std::vector<long> match_right(right_size, -1);
  std::vector<char> used;
  std::function<bool(size_t)> try_augment = [&](size_t v) {
    for (size_t r : adj[v]) {
      if (used[r]) continue;
      used[r] = 1;
      if (match_right[r] < 0 || try_augment(static_cast<size_t>(match_right[r]))) {
        match_right[r] = static_cast<long>(v);
        return true;
      }
    }
    return false;
  };
  size_t matched = 0;
  for (size_t v = 0; v < adj.size(); ++v) {
    used.assign(right_size, 0);
    if (try_augment(v)) ++matched;
  }
  return matched;
}

}  // namespace

ParsedEvents parse_events(std::istream& in) {
  if (!in) throw IoError("event stream is not readable");
  ParsedEvents out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      json rec = json::parse(line);
      if (!rec.is_object()) throw RecordError("record is not an object");
      DappEvent ev;
      ev.chain = require_string(rec, "chain");
      ev.tx_hash = require_string(rec, "tx_hash");
      auto bt = rec.find("block_time");
      if (bt == rec.end() || !bt->is_number_integer()) throw RecordError("block_time is not an integer");
      ev.block_time = bt->get<int64_t>();
      if (ev.block_time < 0) throw RecordError("negative timestamp");
      try {
        ev.account = normalize_address(require_string(rec, "account"));
      } catch (const std::invalid_argument&) {
        throw RecordError("malformed address in account");
      }
      ev.activity_type = require_string(rec, "activity_type");
      if (auto amount = optional_string(rec, "amount")) {
        try {
          ev.amount = Amount::parse(*amount);
        } catch (const std::invalid_argument& e) {
          throw RecordError(e.what());
        }
      }
      ev.route_from = optional_string(rec, "route_from");
      ev.route_to = optional_string(rec, "route_to");
      out.events.push_back(std::move(ev));
    } catch (const RecordError& e) {
      out.diagnostics.push_back({line_no, e.what()});
    } catch (const json::exception&) {
      out.diagnostics.push_back({line_no, "invalid json"});
    }
  }
  if (in.bad()) throw IoError("error while reading event stream");
  return out;
}

std::string serialize_event(const DappEvent& ev) {
  nlohmann::ordered_json rec;
  rec["chain"] = ev.chain;
  rec["tx_hash"] = ev.tx_hash;
  rec["block_time"] = ev.block_time;
  rec["account"] = ev.account;
  rec["activity_type"] = ev.activity_type;
  if (ev.amount) rec["amount"] = ev.amount->to_string();
  if (ev.route_from) rec["route_from"] = *ev.route_from;
  if (ev.route_to) rec["route_to"] = *ev.route_to;
  return rec.dump();
}

ActivitySequence make_sequence(const std::vector<std::string>& types, AccountId account) {
  ActivitySequence seq;
  seq.account = std::move(account);
  int64_t t = 0;
  for (const auto& type : types) {
    seq.items.push_back({t, std::to_string(t), type, {}});
    ++t;
  }
  return seq;
}

SequenceBuild build_activity_sequences(std::span<const DappEvent> events) {
  SequenceBuild out;
  for (size_t i = 0; i < events.size(); ++i) {
    const DappEvent& ev = events[i];
    if (ev.activity_type.empty()) {
      out.diagnostics.push_back({i + 1, "empty activity_type"});
      continue;
    }
    auto& seq = out.sequences[ev.account];
    seq.account = ev.account;
    seq.items.push_back(
        {ev.block_time, ev.tx_hash, ev.activity_type, {ev.amount, ev.route_from, ev.route_to}});
  }
  for (auto& [account, seq] : out.sequences) {
    std::stable_sort(seq.items.begin(), seq.items.end(), [](const Activity& a, const Activity& b) {
      return std::tie(a.timestamp, a.tx_hash) < std::tie(b.timestamp, b.tx_hash);
    });
  }
  return out;
}

ActivityKey activity_key(const Activity& a, const MatchMode& mode) {
  ActivityKey key{a.type, std::nullopt};
  if (mode.kind == MatchMode::Kind::kTypeAndAmount) key.amount = a.params.amount;
  return key;
}

bool key_match(const ActivityKey& x, const ActivityKey& y, const MatchMode& mode) {
  if (x.type != y.type) return false;
  if (mode.kind == MatchMode::Kind::kTypeOnly) return true;
  if (!x.amount || !y.amount) return !x.amount && !y.amount;
  const double ax = x.amount->to_double();
  const double ay = y.amount->to_double();
  return std::abs(ax - ay) / std::max({ax, ay, kZeroGuard}) <= mode.delta;
}

bool activity_match(const Activity& x, const Activity& y, const MatchMode& mode) {
  return key_match(activity_key(x, mode), activity_key(y, mode), mode);
}

PairSet pair_set(const ActivitySequence& seq, const MatchMode& mode) {
  PairSet out;
  std::vector<ActivityKey> keys;
  keys.reserve(seq.items.size());
  for (const auto& item : seq.items) keys.push_back(activity_key(item, mode));
  for (size_t i = 0; i < keys.size(); ++i) {
    for (size_t j = i + 1; j < keys.size(); ++j) out.pairs.emplace(keys[i], keys[j]);
  }
  return out;
}

double seq_sim(const ActivitySequence& s1, const ActivitySequence& s2, const MatchMode& mode) {
  const ActivitySequence* both[] = {&s1, &s2};
  return SimilarityIndex(both, mode).similarity(0, 1);
}

SimilarityIndex::SimilarityIndex(std::span<const ActivitySequence* const> sequences,
                                 const MatchMode& mode)
    : mode_(mode) {
  std::unordered_map<std::string, uint32_t> type_ids;
  auto intern = [&](const std::string& type) {
    auto [it, inserted] = type_ids.try_emplace(type, static_cast<uint32_t>(type_ids.size()));
    return uint64_t{it->second};
  };
  entries_.reserve(sequences.size());
  for (const ActivitySequence* seq : sequences) {
    Entry e;
    const auto& items = seq->items;
    e.empty_sequence = items.empty();
    if (items.size() == 1) e.single = activity_key(items.front(), mode);
    if (mode.kind == MatchMode::Kind::kTypeOnly) {
      std::vector<uint64_t> ids;
      ids.reserve(items.size());
      for (const auto& item : items) ids.push_back(intern(item.type));
      for (size_t i = 0; i < ids.size(); ++i) {
        for (size_t j = i + 1; j < ids.size(); ++j) e.codes.push_back((ids[i] << 32) | ids[j]);
      }
      std::sort(e.codes.begin(), e.codes.end());
      e.codes.erase(std::unique(e.codes.begin(), e.codes.end()), e.codes.end());
    } else {
      PairSet ps = pair_set(*seq, mode);
      e.pairs.assign(ps.pairs.begin(), ps.pairs.end());
    }
    entries_.push_back(std::move(e));
  }
}

double SimilarityIndex::similarity(size_t i, size_t j) const {
  const Entry& a = entries_[i];
  const Entry& b = entries_[j];
  const bool type_only = mode_.kind == MatchMode::Kind::kTypeOnly;
  const size_t size_a = type_only ? a.codes.size() : a.pairs.size();
  const size_t size_b = type_only ? b.codes.size() : b.pairs.size();

  if (size_a == 0 && size_b == 0) {
    if (a.empty_sequence && b.empty_sequence) return 1.0;
    if (a.single && b.single) return key_match(*a.single, *b.single, mode_) ? 1.0 : 0.0;
    return 0.0;
  }
  if (size_a == 0 || size_b == 0) return 0.0;

  size_t common = 0;
  if (type_only) {
    auto ia = a.codes.begin();
    auto ib = b.codes.begin();
    while (ia != a.codes.end() && ib != b.codes.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        ++common;
        ++ia;
        ++ib;
      }
    }
  } else {
    std::vector<std::vector<size_t>> adj(a.pairs.size());
    for (size_t p = 0; p < a.pairs.size(); ++p) {
      for (size_t q = 0; q < b.pairs.size(); ++q) {
        if (key_match(a.pairs[p].first, b.pairs[q].first, mode_) &&
            key_match(a.pairs[p].second, b.pairs[q].second, mode_)) {
          adj[p].push_back(q);
        }
      }
    }
    common = max_matching(adj, b.pairs.size());
  }
  return static_cast<double>(common) / static_cast<double>(size_a + size_b - common);
}

}  // namespace sybil
