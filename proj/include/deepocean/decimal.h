// Copyright 2026 The Deep Ocean Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEEPOCEAN_DECIMAL_H_
#define DEEPOCEAN_DECIMAL_H_

// Exact decimal with eight fractional digits, for prices.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace deepocean {

class Decimal {
 public:
  static constexpr int kDigits = 8;
  static constexpr std::int64_t kScale = 100'000'000;

  constexpr Decimal() = default;
  static constexpr Decimal from_units(std::int64_t units) {
    Decimal d;
    d.units_ = units;
    return d;
  }
  static constexpr Decimal from_int(std::int64_t v) { return from_units(v * kScale); }

  // Accepts "[-]digits[.digits]" with at most eight fractional digits.
  // Throws Error(kInvalidArgument).
  static Decimal parse(std::string_view text);

  // Shortest form: "100", "100.5", "0.00000001".
  std::string to_string() const;

  constexpr std::int64_t units() const { return units_; }
  constexpr bool positive() const { return units_ > 0; }

  friend constexpr Decimal operator+(Decimal a, Decimal b) { return from_units(a.units_ + b.units_); }
  friend constexpr Decimal operator-(Decimal a, Decimal b) { return from_units(a.units_ - b.units_); }
  friend constexpr auto operator<=>(Decimal, Decimal) = default;

 private:
  std::int64_t units_ = 0;
};

// |quoted - reference| <= tolerance * reference, evaluated exactly.
bool within_tolerance(Decimal quoted, Decimal reference, Decimal tolerance);

}  // namespace deepocean

#endif  // DEEPOCEAN_DECIMAL_H_
