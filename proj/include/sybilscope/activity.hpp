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

// DApp activity sequences and the pair-set Jaccard similarity.
//
// A sequence B1..Bk is represented by the set of its temporally ordered
// pairs {(Bi, Bj) : i < j}. Two sequences are compared by the Jaccard
// coefficient of those sets, which tolerates inserted noise activities
// while still respecting the relative order of the shared ones.

#ifndef SYBILSCOPE_ACTIVITY_HPP_
#define SYBILSCOPE_ACTIVITY_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sybilscope/amount.hpp"
#include "sybilscope/ingest.hpp"

namespace sybil {

struct DappEvent {
  std::string chain;
  std::string tx_hash;
  int64_t block_time = 0;
  AccountId account;
  std::string activity_type;
  std::optional<Amount> amount;
  std::optional<std::string> route_from;
  std::optional<std::string> route_to;

  friend bool operator==(const DappEvent&, const DappEvent&) = default;
};

struct ParsedEvents {
  std::vector<DappEvent> events;
  std::vector<ParseDiagnostic> diagnostics;
};

// Newline-delimited JSON activity events. Throws IoError on an unreadable
// stream; bad records become diagnostics.
ParsedEvents parse_events(std::istream& in);
std::string serialize_event(const DappEvent& ev);

struct ActivityParams {
  std::optional<Amount> amount;
  std::optional<std::string> route_from;
  std::optional<std::string> route_to;

  friend bool operator==(const ActivityParams&, const ActivityParams&) = default;
};

struct Activity {
  int64_t timestamp = 0;
  std::string tx_hash;
  std::string type;
  ActivityParams params;

  friend bool operator==(const Activity&, const Activity&) = default;
};

struct ActivitySequence {
  AccountId account;
  std::vector<Activity> items;  // sorted by (timestamp, tx_hash)
};

// Convenience for fixtures: timestamps 0, 1, 2, ... and no parameters.
ActivitySequence make_sequence(const std::vector<std::string>& types, AccountId account = {});

struct SequenceBuild {
  std::map<AccountId, ActivitySequence> sequences;
  // `line` holds the 1-based position of the offending event.
  std::vector<ParseDiagnostic> diagnostics;
};

SequenceBuild build_activity_sequences(std::span<const DappEvent> events);

struct MatchMode {
  enum class Kind { kTypeOnly, kTypeAndAmount };
  static constexpr double kDefaultDelta = 0.05;

  Kind kind = Kind::kTypeOnly;
  double delta = kDefaultDelta;

  static MatchMode type_only() { return {}; }
  static MatchMode type_and_amount(double delta = kDefaultDelta) {
    return {Kind::kTypeAndAmount, delta};
  }
};

// The part of an activity that takes part in matching under a mode.
struct ActivityKey {
  std::string type;
  std::optional<Amount> amount;  // unset under kTypeOnly

  friend bool operator==(const ActivityKey&, const ActivityKey&) = default;
  friend auto operator<=>(const ActivityKey&, const ActivityKey&) = default;
};

ActivityKey activity_key(const Activity& a, const MatchMode& mode);

// Types equal, and under kTypeAndAmount the relative amount gap
// |x - y| / max(x, y, 1e-12) is within delta. A missing amount only
// matches another missing amount.
bool activity_match(const Activity& x, const Activity& y, const MatchMode& mode);
bool key_match(const ActivityKey& x, const ActivityKey& y, const MatchMode& mode);

struct PairSet {
  std::set<std::pair<ActivityKey, ActivityKey>> pairs;

  size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

PairSet pair_set(const ActivitySequence& seq, const MatchMode& mode = {});

// |Pairs(s1) ∩ Pairs(s2)| / |Pairs(s1) ∪ Pairs(s2)|. Under kTypeAndAmount
// the intersection is a maximum one-to-one matching of approximately equal
// pairs. Sequences with no pairs compare as 1 only when both are empty or
// both hold a single matching activity.
double seq_sim(const ActivitySequence& s1, const ActivitySequence& s2,
               const MatchMode& mode = {});

// Precompiled pair sets for many sequences, for all-pairs similarity.
class SimilarityIndex {
 public:
  SimilarityIndex(std::span<const ActivitySequence* const> sequences, const MatchMode& mode);

  size_t size() const { return entries_.size(); }
  double similarity(size_t i, size_t j) const;

 private:
  struct Entry {
    std::vector<uint64_t> codes;           // sorted unique pair codes (type-only)
    std::vector<std::pair<ActivityKey, ActivityKey>> pairs;  // amount mode
    std::optional<ActivityKey> single;     // set when the sequence has one item
    bool empty_sequence = false;
  };

  MatchMode mode_;
  std::vector<Entry> entries_;
};

}  // namespace sybil

#endif  // SYBILSCOPE_ACTIVITY_HPP_
