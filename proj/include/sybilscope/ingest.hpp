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

// Snapshot ingestion: newline-delimited JSON transfer records, address
// lists, and the preprocessing filters that drop contract, exchange and
// whitelisted addresses before graph construction.

#ifndef SYBILSCOPE_INGEST_HPP_
#define SYBILSCOPE_INGEST_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sybilscope/amount.hpp"

namespace sybil {

// Normalized account identifier (lowercase, "0x" prefix when present).
// Graphs and activity sequences are keyed by this value alone so that an
// EOA that is active on several chains is one account.
using AccountId = std::string;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Address {
  std::string chain;
  AccountId value;

  friend bool operator==(const Address&, const Address&) = default;
  friend auto operator<=>(const Address&, const Address&) = default;
};

// Lowercases and validates an address: optional 0x prefix followed by 26-40
// alphanumeric characters. Throws std::invalid_argument("malformed address").
AccountId normalize_address(std::string_view raw);

struct Transaction {
  std::string tx_hash;
  std::string chain;
  int64_t timestamp = 0;
  Address from;
  Address to;
  std::string token;
  Amount amount;
  bool from_is_contract = false;
  bool to_is_contract = false;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct ParseDiagnostic {
  size_t line = 0;  // 1-based
  std::string reason;
};

struct ParsedTransactions {
  std::vector<Transaction> transactions;
  std::vector<ParseDiagnostic> diagnostics;
};

// Reads newline-delimited transaction records. Malformed records become
// diagnostics; they never abort the read. When `expected_chain` is set,
// records naming another chain are rejected and records without a chain
// field inherit it. Throws IoError if the stream is unreadable.
ParsedTransactions parse_transactions(std::istream& in,
                                      std::optional<std::string> expected_chain = std::nullopt);

// One JSON object, no trailing newline.
std::string serialize_transaction(const Transaction& tx);

struct FilterConfig {
  std::set<AccountId> contract_addresses;
  std::set<AccountId> exchange_addresses;
  std::set<AccountId> whitelist;

  bool excludes(const AccountId& account) const {
    return contract_addresses.contains(account) || exchange_addresses.contains(account) ||
           whitelist.contains(account);
  }
};

// Drops every transfer touching a contract (per-record flag or list), an
// exchange address or a whitelisted address. Order is preserved.
std::vector<Transaction> apply_filters(const std::vector<Transaction>& txs,
                                       const FilterConfig& cfg);

// Plain text, one address per line, '#' starts a comment. Malformed lines
// are reported through `diagnostics` when provided.
std::set<AccountId> read_address_list(std::istream& in,
                                      std::vector<ParseDiagnostic>* diagnostics = nullptr);
std::set<AccountId> read_address_list_file(const std::string& path,
                                           std::vector<ParseDiagnostic>* diagnostics = nullptr);

}  // namespace sybil

#endif  // SYBILSCOPE_INGEST_HPP_
