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

#include "sybilscope/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <unordered_set>

#include "json.hpp"

namespace sybil {
namespace {

using nlohmann::json;

struct RecordError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) throw RecordError(std::string("missing field ") + key);
  return *it;
}

std::string require_string(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_string()) throw RecordError(std::string("field ") + key + " is not a string");
  return v.get<std::string>();
}

bool optional_bool(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return false;
  if (!it->is_boolean()) throw RecordError(std::string("field ") + key + " is not a boolean");
  return it->get<bool>();
}

int64_t require_timestamp(const json& obj) {
  const json& v = require(obj, "block_time");
  if (!v.is_number_integer()) throw RecordError("block_time is not an integer");
  if (v.is_number_unsigned()) return static_cast<int64_t>(v.get<uint64_t>());
  int64_t t = v.get<int64_t>();
  if (t < 0) throw RecordError("negative timestamp");
  return t;
}

AccountId require_address(const json& obj, const char* key) {
  try {
    return normalize_address(require_string(obj, key));
  } catch (const std::invalid_argument&) {
    throw RecordError(std::string("malformed address in ") + key);
  }
}

}  // namespace

AccountId normalize_address(std::string_view raw) {
  raw = trim(raw);
  std::string out;
  if (raw.size() >= 2 && raw[0] == '0' && (raw[1] == 'x' || raw[1] == 'X')) {
    out = "0x";
    raw.remove_prefix(2);
  }
  if (raw.size() < 26 || raw.size() > 40) throw std::invalid_argument("malformed address");
  for (char c : raw) {
    if (!std::isalnum(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("malformed address");
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

ParsedTransactions parse_transactions(std::istream& in, std::optional<std::string> expected_chain) {
  if (!in) throw IoError("transaction stream is not readable");
  ParsedTransactions out;
  std::unordered_set<std::string> seen_hashes;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      json rec = json::parse(line);
      if (!rec.is_object()) throw RecordError("record is not an object");

      Transaction tx;
      auto chain_it = rec.find("chain");
      if (chain_it != rec.end() && !chain_it->is_null()) {
        if (!chain_it->is_string()) throw RecordError("field chain is not a string");
        tx.chain = chain_it->get<std::string>();
      } else if (expected_chain) {
        tx.chain = *expected_chain;
      } else {
        throw RecordError("missing field chain");
      }
      if (tx.chain.empty()) throw RecordError("empty chain");
      if (expected_chain && tx.chain != *expected_chain) throw RecordError("chain mismatch");

      tx.tx_hash = require_string(rec, "tx_hash");
      if (tx.tx_hash.empty()) throw RecordError("empty tx_hash");
      tx.timestamp = require_timestamp(rec);
      tx.from = {tx.chain, require_address(rec, "from")};
      tx.to = {tx.chain, require_address(rec, "to")};
      tx.token = require_string(rec, "token");
      try {
        tx.amount = Amount::parse(require_string(rec, "amount"));
      } catch (const std::invalid_argument& e) {
        throw RecordError(e.what());
      }
      tx.from_is_contract = optional_bool(rec, "from_is_contract");
      tx.to_is_contract = optional_bool(rec, "to_is_contract");

      if (!seen_hashes.insert(tx.tx_hash).second) throw RecordError("duplicate tx_hash");
      out.transactions.push_back(std::move(tx));
    } catch (const RecordError& e) {
      out.diagnostics.push_back({line_no, e.what()});
    } catch (const json::exception&) {
      out.diagnostics.push_back({line_no, "invalid json"});
    }
  }
  if (in.bad()) throw IoError("error while reading transaction stream");
  return out;
}

std::string serialize_transaction(const Transaction& tx) {
  // nlohmann::ordered_json keeps the documented field order stable on disk.
  nlohmann::ordered_json rec;
  rec["chain"] = tx.chain;
  rec["tx_hash"] = tx.tx_hash;
  rec["block_time"] = tx.timestamp;
  rec["from"] = tx.from.value;
  rec["to"] = tx.to.value;
  rec["token"] = tx.token;
  rec["amount"] = tx.amount.to_string();
  rec["from_is_contract"] = tx.from_is_contract;
  rec["to_is_contract"] = tx.to_is_contract;
  return rec.dump();
}

std::vector<Transaction> apply_filters(const std::vector<Transaction>& txs,
                                       const FilterConfig& cfg) {
  std::vector<Transaction> kept;
  kept.reserve(txs.size());
  std::copy_if(txs.begin(), txs.end(), std::back_inserter(kept), [&](const Transaction& tx) {
    if (tx.from_is_contract || tx.to_is_contract) return false;
    return !cfg.excludes(tx.from.value) && !cfg.excludes(tx.to.value);
  });
  return kept;
}

std::set<AccountId> read_address_list(std::istream& in, std::vector<ParseDiagnostic>* diagnostics) {
  if (!in) throw IoError("address list is not readable");
  std::set<AccountId> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    try {
      out.insert(normalize_address(view));
    } catch (const std::invalid_argument& e) {
      if (diagnostics) diagnostics->push_back({line_no, e.what()});
    }
  }
  if (in.bad()) throw IoError("error while reading address list");
  return out;
}

std::set<AccountId> read_address_list_file(const std::string& path,
                                           std::vector<ParseDiagnostic>* diagnostics) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open address list " + path);
  return read_address_list(in, diagnostics);
}

}  // namespace sybil
