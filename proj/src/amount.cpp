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

#include "sybilscope/amount.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace sybil {
namespace {

using u128 = unsigned __int128;

constexpr u128 pow10(int n) {
  u128 v = 1;
  for (int i = 0; i < n; ++i) v *= 10;
  return v;
}

constexpr u128 kScale = pow10(Amount::kFractionDigits);
constexpr u128 kMax = std::numeric_limits<u128>::max();

bool mul_add(u128& acc, u128 mul, u128 add) {
  if (acc > (kMax - add) / mul) return false;
  acc = acc * mul + add;
  return true;
}

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

Amount Amount::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("malformed amount");
  if (text.front() == '-') {
    // "-0" and "-0.0" are still rejected: the sign itself is the violation.
    throw std::invalid_argument("negative amount");
  }
  if (text.front() == '+') text.remove_prefix(1);

  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac =
      dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw std::invalid_argument("malformed amount");
  auto all_digits = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!all_digits(whole) || !all_digits(frac)) throw std::invalid_argument("malformed amount");
  if (frac.size() > static_cast<size_t>(kFractionDigits)) {
    throw std::invalid_argument("too many fractional digits");
  }

  u128 units = 0;
  for (char c : whole) {
    if (!mul_add(units, 10, static_cast<u128>(c - '0'))) {
      throw std::invalid_argument("amount overflow");
    }
  }
  if (units > kMax / kScale) throw std::invalid_argument("amount overflow");
  units *= kScale;
  u128 frac_units = 0;
  for (char c : frac) frac_units = frac_units * 10 + static_cast<u128>(c - '0');
  frac_units *= pow10(kFractionDigits - static_cast<int>(frac.size()));
  if (units > kMax - frac_units) throw std::invalid_argument("amount overflow");
  return from_units(units + frac_units);
}

std::string Amount::to_string() const {
  std::string out = u128_to_string(units_ / kScale);
  u128 frac = units_ % kScale;
  if (frac == 0) return out;
  std::string digits = u128_to_string(frac);
  digits.insert(0, static_cast<size_t>(kFractionDigits) - digits.size(), '0');
  while (!digits.empty() && digits.back() == '0') digits.pop_back();
  return out + "." + digits;
}

double Amount::to_double() const {
  return static_cast<double>(units_ / kScale) +
         static_cast<double>(units_ % kScale) / static_cast<double>(kScale);
}

Amount& Amount::operator+=(const Amount& other) {
  if (units_ > kMax - other.units_) throw std::overflow_error("amount overflow");
  units_ += other.units_;
  return *this;
}

}  // namespace sybil
