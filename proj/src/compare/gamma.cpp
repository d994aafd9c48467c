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

#include <algorithm>

#include "deepocean/compare.h"
#include "deepocean/errors.h"

namespace deepocean::compare {

std::string_view round_name(Round r) {
  switch (r) {
    case Round::kKeys: return "keys";
    case Round::kBits: return "encrypted bits";
    case Round::kShuffle1: return "shuffle (role 1)";
    case Round::kShuffle2: return "shuffle (role 2)";
    case Round::kBlind: return "blind";
    case Round::kShares: return "decrypt";
    case Round::kReveal: return "reveal";
  }
  return "unknown";
}

Round round_from_u8(std::uint8_t v) {
  switch (v) {
    case 5: case 7: case 9: case 10: case 11: case 12: case 15:
      return static_cast<Round>(v);
    default:
      throw DecodeError("unknown round " + std::to_string(v));
  }
}

void CompareConfig::validate() const {
  if (bit_width < 1 || bit_width > kMaxBitWidth) {
    throw Error(ErrorCode::kInvalidArgument, "bit width must be in [1, 64]");
  }
  if (role != 1 && role != 2) {
    throw Error(ErrorCode::kInvalidArgument, "role must be 1 or 2");
  }
  if (session_id.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty session id");
  }
  if (identity_keys[0].is_identity() || identity_keys[1].is_identity() ||
      identity_keys[0] == identity_keys[1]) {
    throw Error(ErrorCode::kInvalidArgument, "identity keys must be distinct");
  }
}

bool size_in_range(std::uint64_t size, unsigned bit_width) {
  if (size == 0) return false;
  return bit_width >= 64 || size < (std::uint64_t{1} << bit_width);
}

std::vector<std::uint8_t> to_bits(std::uint64_t size, unsigned bit_width) {
  std::vector<std::uint8_t> bits(bit_width);
  for (unsigned j = 0; j < bit_width && j < 64; ++j) bits[j] = (size >> j) & 1;
  return bits;
}

std::uint64_t from_bits(std::span<const std::uint8_t> bits) {
  std::uint64_t v = 0;
  for (std::size_t j = 0; j < bits.size() && j < 64; ++j) {
    v |= std::uint64_t{bits[j] & 1u} << j;
  }
  return v;
}

Scalar circuit_weight(unsigned d, bool offset_weights) {
  const Scalar w = Scalar::pow2(d);
  return offset_weights ? w - Scalar::from_u64(2) : w;
}

WideInt gamma(unsigned j, std::span<const std::uint8_t> bits1,
              std::span<const std::uint8_t> bits2, unsigned bit_width,
              bool offset_weights) {
  WideInt g = 1 + WideInt(bits2[j - 1]) - WideInt(bits1[j - 1]);
  for (unsigned d = j + 1; d <= bit_width; ++d) {
    WideInt w = WideInt(1) << d;
    if (offset_weights) w -= 2;
    g += w * (WideInt(bits1[d - 1]) - WideInt(bits2[d - 1]));
  }
  return g;
}

std::vector<elgamal::Ciphertext> build_circuit(
    std::span<const elgamal::Ciphertext> bits1,
    std::span<const elgamal::Ciphertext> bits2, bool offset_weights) {
  if (bits1.size() != bits2.size() || bits1.empty()) {
    throw Error(ErrorCode::kMalformedStatement, "circuit: bit vectors differ in length");
  }
  const std::size_t k = bits1.size();
  const elgamal::Ciphertext one{Point::generator(), Point::identity()};
  std::vector<elgamal::Ciphertext> out(k);
  // suffix = sum_{d > j} w_d * (A1_d - A2_d), built from the top bit down.
  elgamal::Ciphertext suffix;
  for (std::size_t idx = k; idx-- > 0;) {
    const unsigned j = static_cast<unsigned>(idx + 1);
    out[idx] = one + (bits2[idx] - bits1[idx]) + suffix;
    suffix = suffix + circuit_weight(j, offset_weights) * (bits1[idx] - bits2[idx]);
  }
  return out;
}

Scalar aggregate_randomness(std::span<const Scalar> bit_randomness) {
  Scalar acc;
  for (std::size_t j = 0; j < bit_randomness.size(); ++j) {
    acc += Scalar::pow2(static_cast<unsigned>(j)) * bit_randomness[j];
  }
  return acc;
}

bool verify_reveal(const Reveal& reveal,
                   std::span<const elgamal::Ciphertext> bit_cts,
                   const Point& combined_key) {
  Point rhs;
  for (std::size_t j = 0; j < bit_cts.size(); ++j) {
    rhs += Scalar::pow2(static_cast<unsigned>(j)) * bit_cts[j].a;
  }
  const Point lhs = Point::mul_base(Scalar::from_u64(reveal.size)) +
                    reveal.aggregate_randomness * combined_key;
  return lhs == rhs;
}

}  // namespace deepocean::compare
