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

#ifndef DEEPOCEAN_COMPARE_H_
#define DEEPOCEAN_COMPARE_H_

// Two-party secure comparison of order sizes.
//
// Each party encrypts the bits of its size under the joint key. Both build
// the same vector of ciphertexts (V_j, U_j) whose plaintext gamma(j) is zero
// exactly at the most significant bit where s1 has a 1 and s2 a 0, with all
// higher bits equal. The vector is shuffled by both parties, blinded by both,
// and jointly decrypted; a zero anywhere means s1 > s2.
//
// Bit j = 1 is the least significant bit.

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "deepocean/elgamal.h"
#include "deepocean/group.h"

namespace deepocean::compare {

using Clock = std::chrono::steady_clock;

// Frame rounds, numbered by protocol step.
enum class Round : std::uint8_t {
  kKeys = 5,
  kBits = 7,
  kShuffle1 = 9,
  kShuffle2 = 10,
  kBlind = 11,
  kShares = 12,
  kReveal = 15,
};

std::string_view round_name(Round r);
// Throws DecodeError for unknown values.
Round round_from_u8(std::uint8_t v);

inline constexpr unsigned kMaxBitWidth = 64;

struct CompareConfig {
  unsigned bit_width = kMaxBitWidth;
  int role = 1;  // assigned by the relay's match ticket
  Bytes session_id;
  // 2^d - 2 circuit weights instead of 2^d; kept to reproduce their false verdicts.
  bool offset_weights = false;
  // Identity keys of role 1 and role 2, in that order.
  std::array<Point, 2> identity_keys;
  std::chrono::milliseconds timeout{60'000};

  // Throws Error(kInvalidArgument).
  void validate() const;
  const Point& identity_of(int r) const { return identity_keys.at(r - 1); }
};

struct Verdict {
  int smaller_role = 1;
  bool is_strict = false;  // false: s1 <= s2
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct Reveal {
  std::uint64_t size = 0;
  Scalar aggregate_randomness;
};

// True iff 0 < size < 2^bit_width.
bool size_in_range(std::uint64_t size, unsigned bit_width);

std::vector<std::uint8_t> to_bits(std::uint64_t size, unsigned bit_width);
std::uint64_t from_bits(std::span<const std::uint8_t> bits);

// Circuit weight for 1-based bit index d: 2^d, or 2^d - 2 when
// offset_weights is set.
Scalar circuit_weight(unsigned d, bool offset_weights);

// Reference plaintext of circuit element j (1-based):
//   1 + b2_j - b1_j + sum_{d > j} w_d * (b1_d - b2_d)
WideInt gamma(unsigned j, std::span<const std::uint8_t> bits1,
              std::span<const std::uint8_t> bits2, unsigned bit_width,
              bool offset_weights);

// Homomorphic evaluation of gamma over the two parties' bit ciphertexts.
// Element j-1 of the result encrypts gamma(j) under the joint key.
std::vector<elgamal::Ciphertext> build_circuit(
    std::span<const elgamal::Ciphertext> bits1,
    std::span<const elgamal::Ciphertext> bits2, bool offset_weights);

// sum_j 2^(j-1) * r_j
Scalar aggregate_randomness(std::span<const Scalar> bit_randomness);

// size*G + r*P == sum_j 2^(j-1) * A_j
bool verify_reveal(const Reveal& reveal,
                   std::span<const elgamal::Ciphertext> bit_cts,
                   const Point& combined_key);

}  // namespace deepocean::compare

#endif  // DEEPOCEAN_COMPARE_H_
