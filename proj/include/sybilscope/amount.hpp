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

#ifndef SYBILSCOPE_AMOUNT_HPP_
#define SYBILSCOPE_AMOUNT_HPP_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace sybil {

// Non-negative token amount carried as an exact fixed-point decimal with
// 18 fractional digits.
class Amount {
 public:
  static constexpr int kFractionDigits = 18;

  constexpr Amount() = default;

  // Parses a plain decimal string such as "12", "0.5" or "1.000000000000000001".
  // Throws std::invalid_argument with a short reason ("negative amount",
  // "malformed amount", "too many fractional digits", "amount overflow").
  static Amount parse(std::string_view text);

  static Amount from_units(unsigned __int128 units) {
    Amount a;
    a.units_ = units;
    return a;
  }

  unsigned __int128 units() const { return units_; }
  bool is_zero() const { return units_ == 0; }

  // Canonical form: no trailing fractional zeros, no exponent.
  std::string to_string() const;
  double to_double() const;

  // Throws std::overflow_error.
  Amount& operator+=(const Amount& other);
  friend Amount operator+(Amount lhs, const Amount& rhs) { return lhs += rhs; }

  friend bool operator==(const Amount&, const Amount&) = default;
  friend auto operator<=>(const Amount& a, const Amount& b) {
    return a.units_ <=> b.units_;
  }

 private:
  unsigned __int128 units_ = 0;
};

}  // namespace sybil

#endif  // SYBILSCOPE_AMOUNT_HPP_
