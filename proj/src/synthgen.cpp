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

#include "sybilscope/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

namespace sybil {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::vector<std::string> kActivityTypes = {
    "send", "convert", "add_liquidity", "remove_liquidity", "stake", "unstake", "claim", "swap",
};

// mt19937_64 output is fully specified by the standard; the standard
// distributions are not, so sampling is done by hand to keep files
// identical across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}
  uint64_t next() { return engine_(); }
  size_t below(size_t n) { return static_cast<size_t>(next() % n); }
  size_t between(size_t lo, size_t hi) { return lo + below(hi - lo + 1); }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

struct TemplateStep {
  std::string type;
  double amount;
};
using Template = std::vector<TemplateStep>;

class Builder {
 public:
  explicit Builder(const ScenarioConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    clock_ = cfg.start_time;
    dapp_contract_ = fresh_address();
    out_.snapshot.filters.contract_addresses.insert(dapp_contract_);
    for (size_t i = 0; i < cfg.n_exchanges; ++i) {
      exchanges_.push_back(fresh_address());
      out_.snapshot.filters.exchange_addresses.insert(exchanges_.back());
    }
    bonder_ = fresh_address();
    out_.snapshot.filters.whitelist.insert(bonder_);
    for (size_t i = 0; i < cfg.merchant_pool_size; ++i) merchants_.push_back(fresh_address());
    for (size_t i = 0; i < std::max<size_t>(cfg.template_pool_size, 1); ++i) {
      pool_.push_back(random_template());
    }
    for (const auto& chain : cfg.chains) out_.snapshot.transactions[chain];
  }

  Scenario run() {
    size_t bot_index = 0;
    auto accounts_for = [&](size_t override_count) {
      return override_count > 0 ? override_count : cfg_.accounts_per_bot;
    };
    for (size_t i = 0; i < cfg_.n_radial_bots; ++i) {
      plant_radial("radial-" + std::to_string(i), accounts_for(cfg_.radial_accounts), bot_index++);
    }
    for (size_t i = 0; i < cfg_.n_sequential_bots; ++i) {
      plant_sequential("sequential-" + std::to_string(i), accounts_for(cfg_.sequential_accounts),
                       bot_index++);
    }
    for (size_t i = 0; i < cfg_.n_complex_bots; ++i) {
      plant_complex("complex-" + std::to_string(i), accounts_for(cfg_.complex_accounts), i,
                    bot_index++);
    }
    for (size_t i = 0; i < cfg_.n_ordinary_users; ++i) add_ordinary_user();
    out_.truth.snapshot_id = out_.snapshot.id();
    return std::move(out_);
  }

 private:
  AccountId fresh_address() {
    static constexpr char kHex[] = "0123456789abcdef";
    for (;;) {
      std::string a = "0x";
      for (int i = 0; i < 40; ++i) a.push_back(kHex[rng_.below(16)]);
      if (used_.insert(a).second) return a;
    }
  }

  std::string fresh_hash() {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string h = "0x";
    for (int i = 0; i < 16; ++i) h.push_back(kHex[rng_.below(16)]);
    return h + "-" + std::to_string(serial_++);
  }

  int64_t tick() {
    clock_ += static_cast<int64_t>(rng_.between(5, 600));
    return clock_;
  }

  Template random_template() {
    Template t;
    const size_t len = rng_.between(cfg_.min_template_length, cfg_.max_template_length);
    for (size_t i = 0; i < len; ++i) {
      t.push_back({kActivityTypes[rng_.below(kActivityTypes.size())], 0.5 + 4.5 * rng_.unit()});
    }
    return t;
  }

  static Amount amount_of(double value) {
    // Six decimals keeps amounts exact and readable.
    const auto micros = static_cast<unsigned long long>(std::llround(std::max(value, 0.0) * 1e6));
    return Amount::from_units(static_cast<unsigned __int128>(micros) * 1000000000000ULL);
  }

  void transfer(const std::string& chain, const AccountId& from, const AccountId& to,
                double value, bool to_contract = false) {
    Transaction tx;
    tx.tx_hash = fresh_hash();
    tx.chain = chain;
    tx.timestamp = tick();
    tx.from = {chain, from};
    tx.to = {chain, to};
    tx.token = "ETH";
    tx.amount = amount_of(value);
    tx.to_is_contract = to_contract;
    out_.snapshot.transactions[chain].push_back(std::move(tx));
  }

  // Replays a template with noise insertion and amount jitter, one DApp
  // call per activity.
  void play(const std::string& chain, const AccountId& account, const Template& tmpl) {
    auto emit = [&](const std::string& type, double amount) {
      DappEvent ev;
      ev.chain = chain;
      ev.tx_hash = fresh_hash();
      ev.block_time = tick();
      ev.account = account;
      ev.activity_type = type;
      ev.amount = amount_of(amount);
      out_.snapshot.events.push_back(ev);
      transfer(chain, account, dapp_contract_, amount, /*to_contract=*/true);
    };
    for (const auto& step : tmpl) {
      const double jitter = 1.0 + cfg_.amount_jitter * (2.0 * rng_.unit() - 1.0);
      emit(step.type, step.amount * jitter);
      if (rng_.chance(cfg_.noise_probability)) {
        emit(kActivityTypes[rng_.below(kActivityTypes.size())], 0.5 + 4.5 * rng_.unit());
      }
    }
  }

  const std::string& chain_for(size_t bot_index) const {
    return cfg_.chains[bot_index % cfg_.chains.size()];
  }

  void fund_from_exchange(const std::string& chain, const AccountId& account, double value) {
    if (!exchanges_.empty()) {
      transfer(chain, exchanges_[rng_.below(exchanges_.size())], account, value);
    }
  }

  // Occasional whitelisted relayer payouts that must be filtered away.
  void maybe_bonder_payout(const std::string& chain, const AccountId& account) {
    if (rng_.chance(0.05)) transfer(chain, bonder_, account, 0.01);
  }

  std::vector<AccountId> register_bot(const std::string& id, const std::string& pattern,
                                      const AccountId& treasury, size_t n) {
    std::vector<AccountId> accounts;
    for (size_t i = 0; i < n; ++i) {
      accounts.push_back(fresh_address());
      out_.truth.bot_of[accounts.back()] = id;
    }
    out_.truth.pattern_of_bot[id] = pattern;
    out_.bots[id] = {treasury, accounts};
    return accounts;
  }

  void maybe_return(const std::string& chain, const std::vector<AccountId>& accounts,
                    const AccountId& treasury) {
    if (!rng_.chance(cfg_.return_probability)) return;
    for (const auto& a : accounts) transfer(chain, a, treasury, 0.05);
  }

  void plant_radial(const std::string& id, size_t n, size_t bot_index) {
    const std::string& chain = chain_for(bot_index);
    const AccountId treasury = fresh_address();
    auto accounts = register_bot(id, "radial", treasury, n);
    const Template tmpl = random_template();
    fund_from_exchange(chain, treasury, 100.0);
    for (const auto& a : accounts) {
      transfer(chain, treasury, a, 5.0 + rng_.unit());
      maybe_bonder_payout(chain, a);
      play(chain, a, tmpl);
    }
    maybe_return(chain, accounts, treasury);
  }

  void plant_sequential(const std::string& id, size_t n, size_t bot_index) {
    const std::string& chain = chain_for(bot_index);
    const AccountId treasury = fresh_address();
    auto accounts = register_bot(id, "sequential", treasury, n);
    const Template tmpl = random_template();
    fund_from_exchange(chain, treasury, 100.0);
    AccountId previous = treasury;
    for (const auto& a : accounts) {
      transfer(chain, previous, a, 5.0 + rng_.unit());
      maybe_bonder_payout(chain, a);
      play(chain, a, tmpl);
      previous = a;
    }
    if (rng_.chance(cfg_.return_probability)) transfer(chain, previous, treasury, 0.05);
  }

  // Even bots: treasury -> stage-one accounts, each heading a funding
  // chain. Odd bots: treasury -> chain of stage-one accounts, each fanning
  // out to leaves.
  void plant_complex(const std::string& id, size_t n, size_t ordinal, size_t bot_index) {
    const std::string& chain = chain_for(bot_index);
    const AccountId treasury = fresh_address();
    auto accounts = register_bot(id, "complex", treasury, n);
    const Template tmpl = random_template();
    fund_from_exchange(chain, treasury, 100.0);
    const size_t heads = std::clamp<size_t>(n / 4, 2, std::max<size_t>(n, 2));
    const size_t stage_one = std::min(heads, accounts.size());
    for (size_t h = 0; h < stage_one; ++h) {
      const AccountId& head = accounts[h];
      transfer(chain, ordinal % 2 == 0 || h == 0 ? treasury : accounts[h - 1], head, 10.0);
      play(chain, head, tmpl);
      AccountId previous = head;
      for (size_t j = stage_one + h; j < accounts.size(); j += stage_one) {
        const AccountId& target = accounts[j];
        transfer(chain, ordinal % 2 == 0 ? previous : head, target, 3.0 + rng_.unit());
        play(chain, target, tmpl);
        if (ordinal % 2 == 0) previous = target;
      }
    }
    maybe_return(chain, accounts, treasury);
  }

  void add_ordinary_user() {
    const std::string& chain = cfg_.chains[rng_.below(cfg_.chains.size())];
    const AccountId user = fresh_address();
    if (!exchanges_.empty() && rng_.chance(cfg_.exchange_funded_fraction)) {
      fund_from_exchange(chain, user, 2.0 + 5.0 * rng_.unit());
    } else {
      transfer(chain, fresh_address(), user, 2.0 + 5.0 * rng_.unit());
    }
    maybe_bonder_payout(chain, user);
    play(chain, user, pool_[rng_.below(pool_.size())]);
    if (!merchants_.empty()) {
      const size_t payments = rng_.between(1, 3);
      for (size_t i = 0; i < payments; ++i) {
        transfer(chain, user, merchants_[rng_.below(merchants_.size())], 0.1 + rng_.unit());
      }
    }
  }

  const ScenarioConfig& cfg_;
  Rng rng_;
  Scenario out_;
  std::set<AccountId> used_;
  std::vector<AccountId> exchanges_;
  std::vector<AccountId> merchants_;
  std::vector<Template> pool_;
  AccountId dapp_contract_;
  AccountId bonder_;
  int64_t clock_ = 0;
  uint64_t serial_ = 0;
};

size_t count_field(const json& j, const char* key, size_t fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) throw std::invalid_argument(std::string(key) + " must be an integer");
  if (it->is_number_unsigned()) return it->get<size_t>();
  const auto v = it->get<int64_t>();
  if (v < 0) throw std::invalid_argument(std::string(key) + " must not be negative");
  return static_cast<size_t>(v);
}

double real_field(const json& j, const char* key, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) throw std::invalid_argument(std::string(key) + " must be a number");
  return it->get<double>();
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& l : lines) out << l << '\n';
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace

void ScenarioConfig::validate() const {
  auto probability = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  };
  probability(noise_probability, "noise_probability");
  probability(return_probability, "return_probability");
  probability(exchange_funded_fraction, "exchange_funded_fraction");
  if (!(amount_jitter >= 0.0 && amount_jitter < 1.0)) {
    throw std::invalid_argument("amount_jitter must lie in [0, 1)");
  }
  if (chains.empty()) throw std::invalid_argument("at least one chain is required");
  if (min_template_length < 1 || min_template_length > max_template_length) {
    throw std::invalid_argument("invalid template length range");
  }
}

ordered_json ScenarioConfig::to_json() const {
  ordered_json j;
  j["seed"] = seed;
  j["chains"] = chains;
  j["n_radial_bots"] = n_radial_bots;
  j["n_sequential_bots"] = n_sequential_bots;
  j["n_complex_bots"] = n_complex_bots;
  j["accounts_per_bot"] = accounts_per_bot;
  j["radial_accounts"] = radial_accounts;
  j["sequential_accounts"] = sequential_accounts;
  j["complex_accounts"] = complex_accounts;
  j["n_ordinary_users"] = n_ordinary_users;
  j["template_length"] = {min_template_length, max_template_length};
  j["noise_probability"] = noise_probability;
  j["amount_jitter"] = amount_jitter;
  j["template_pool_size"] = template_pool_size;
  j["return_probability"] = return_probability;
  j["merchant_pool_size"] = merchant_pool_size;
  j["n_exchanges"] = n_exchanges;
  j["exchange_funded_fraction"] = exchange_funded_fraction;
  j["start_time"] = start_time;
  return j;
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario must be a JSON object");
  ScenarioConfig c;
  c.seed = count_field(j, "seed", c.seed);
  if (auto it = j.find("chains"); it != j.end()) {
    if (!it->is_array()) throw std::invalid_argument("chains must be an array");
    c.chains = it->get<std::vector<std::string>>();
  }
  c.n_radial_bots = count_field(j, "n_radial_bots", 0);
  c.n_sequential_bots = count_field(j, "n_sequential_bots", 0);
  c.n_complex_bots = count_field(j, "n_complex_bots", 0);
  c.accounts_per_bot = count_field(j, "accounts_per_bot", c.accounts_per_bot);
  c.radial_accounts = count_field(j, "radial_accounts", 0);
  c.sequential_accounts = count_field(j, "sequential_accounts", 0);
  c.complex_accounts = count_field(j, "complex_accounts", 0);
  c.n_ordinary_users = count_field(j, "n_ordinary_users", 0);
  if (auto it = j.find("template_length"); it != j.end()) {
    if (!it->is_array() || it->size() != 2) {
      throw std::invalid_argument("template_length must be [min, max]");
    }
    json range = {{"lo", (*it)[0]}, {"hi", (*it)[1]}};
    c.min_template_length = count_field(range, "lo", 0);
    c.max_template_length = count_field(range, "hi", 0);
  }
  c.noise_probability = real_field(j, "noise_probability", c.noise_probability);
  c.amount_jitter = real_field(j, "amount_jitter", c.amount_jitter);
  c.template_pool_size = count_field(j, "template_pool_size", c.template_pool_size);
  c.return_probability = real_field(j, "return_probability", c.return_probability);
  c.merchant_pool_size = count_field(j, "merchant_pool_size", c.merchant_pool_size);
  c.n_exchanges = count_field(j, "n_exchanges", c.n_exchanges);
  c.exchange_funded_fraction = real_field(j, "exchange_funded_fraction", c.exchange_funded_fraction);
  c.start_time = static_cast<int64_t>(count_field(j, "start_time", static_cast<size_t>(c.start_time)));
  c.validate();
  return c;
}

Scenario generate(const ScenarioConfig& cfg) {
  cfg.validate();
  return Builder(cfg).run();
}

void write_scenario(const Scenario& scenario, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const Snapshot& snap = scenario.snapshot;
  ordered_json tx_files = ordered_json::object();
  for (const auto& [chain, txs] : snap.transactions) {
    std::vector<std::string> lines;
    lines.reserve(txs.size());
    for (const auto& tx : txs) lines.push_back(serialize_transaction(tx));
    const std::string name = "tx_" + chain + ".jsonl";
    write_lines(dir / name, lines);
    tx_files[chain] = name;
  }
  std::vector<std::string> events;
  events.reserve(snap.events.size());
  for (const auto& ev : snap.events) events.push_back(serialize_event(ev));
  write_lines(dir / "events.jsonl", events);

  auto write_list = [&](const char* name, const char* header, const std::set<AccountId>& s) {
    std::vector<std::string> lines{std::string("# ") + header};
    lines.insert(lines.end(), s.begin(), s.end());
    write_lines(dir / name, lines);
  };
  write_list("contracts.txt", "contract addresses", snap.filters.contract_addresses);
  write_list("exchanges.txt", "exchange hot wallets", snap.filters.exchange_addresses);
  write_list("whitelist.txt", "whitelisted addresses", snap.filters.whitelist);
  write_lines(dir / "truth.json", {scenario.truth.to_json().dump(2)});

  ordered_json config;
  config["snapshot"] = {{"transactions", tx_files},
                        {"events", "events.jsonl"},
                        {"contracts", "contracts.txt"},
                        {"exchanges", "exchanges.txt"},
                        {"whitelist", "whitelist.txt"}};
  config["detect"] = DetectConfig{}.to_json();
  config["output"] = {{"report", "report.json"}};
  write_lines(dir / "config.json", {config.dump(2)});
}

}  // namespace sybil
