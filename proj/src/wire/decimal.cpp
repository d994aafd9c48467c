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

#include "deepocean/decimal.h"

#include <charconv>
#include <limits>

#include "deepocean/errors.h"

namespace deepocean {

namespace {

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::kInvalidArgument, "bad decimal '" + std::string(text) + "'");
}

std::int64_t parse_digits(std::string_view s, std::string_view whole) {
  if (s.empty()) bad(whole);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) bad(whole);
  return v;
}

}  // namespace

Decimal Decimal::parse(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty() || s.front() == '-' || s.front() == '+') bad(text);
  const auto dot = s.find('.');
  const std::string_view int_part = s.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? "" : s.substr(dot + 1);
  if (dot != std::string_view::npos && frac_part.empty()) bad(text);
  if (frac_part.size() > static_cast<std::size_t>(kDigits)) bad(text);

  const std::int64_t whole = int_part.empty() ? 0 : parse_digits(int_part, text);
  if (int_part.empty() && frac_part.empty()) bad(text);
  if (whole > std::numeric_limits<std::int64_t>::max() / kScale - 1) bad(text);
  std::int64_t frac = 0;
  if (!frac_part.empty()) {
    frac = parse_digits(frac_part, text);
    for (std::size_t i = frac_part.size(); i < static_cast<std::size_t>(kDigits); ++i) frac *= 10;
  }
  const std::int64_t units = whole * kScale + frac;
  return from_units(negative ? -units : units);
}

std::string Decimal::to_string() const {
  const bool negative = units_ < 0;
  const std::uint64_t abs = negative ? 0 - static_cast<std::uint64_t>(units_)
                                     : static_cast<std::uint64_t>(units_);
  std::string out = (negative ? "-" : "") + std::to_string(abs / kScale);
  std::uint64_t frac = abs % kScale;
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, kDigits - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

bool within_tolerance(Decimal quoted, Decimal reference, Decimal tolerance) {
  // Compare |q - r| * scale <= tol * r in 128-bit integers.
  using Wide = __int128;
  Wide diff = Wide(quoted.units()) - Wide(reference.units());
  if (diff < 0) diff = -diff;
  return diff * Decimal::kScale <= Wide(tolerance.units()) * Wide(reference.units());
}

}  // namespace deepocean
