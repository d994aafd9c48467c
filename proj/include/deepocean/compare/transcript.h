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

#ifndef DEEPOCEAN_COMPARE_TRANSCRIPT_H_
#define DEEPOCEAN_COMPARE_TRANSCRIPT_H_

// Public verifier for one comparison session.
//
// Holds only what travels on the wire, so the same code runs inside each
// party and inside the relay. Every frame is checked for signature, session,
// round order and embedded proofs before it is recorded.
//
// Per-role order: keys, bits, shuffle (role 1 sends round 9, role 2 round 10),
// blind, shares, and finally reveal from the smaller party only.

#include <array>
#include <optional>
#include <vector>

#include "deepocean/compare.h"
#include "deepocean/compare/frame.h"

namespace deepocean::compare {

class PublicTranscript {
 public:
  // config.role is ignored.
  explicit PublicTranscript(CompareConfig config);

  // Verifies and records a frame. Throws:
  //   DecodeError               malformed bytes
  //   Error(kBadSignature)      not signed by the role's identity key
  //   Error(kStaleRound)        the role already sent this round
  //   Error(kProtocolOrderViolation)  wrong session, role or prerequisites
  //   BadProofError             an embedded proof failed
  //   Error(kBadReveal)         reveal out of range or not binding
  const Frame& accept(ByteSpan raw);

  // Same checks as accept() without recording.
  void check(ByteSpan raw) const;

  const CompareConfig& config() const { return config_; }
  unsigned bit_width() const { return config_.bit_width; }

  std::optional<Point> session_key(int role) const { return keys_.at(role - 1); }
  bool has_combined_key() const { return keys_[0] && keys_[1]; }
  Point combined_key() const;

  const std::vector<elgamal::Ciphertext>& bit_cts(int role) const {
    return bits_.at(role - 1);
  }
  const std::vector<elgamal::Ciphertext>& circuit() const { return circuit_; }
  const std::vector<elgamal::Ciphertext>& shuffle_outputs(int which) const {
    return shuffled_.at(which - 1);
  }
  const std::vector<elgamal::Ciphertext>& blinded(int role) const {
    return blinded_.at(role - 1);
  }
  const std::vector<Point>& shares(int role) const { return shares_.at(role - 1); }

  // T_j = (V^1 + V^2) - (W^1 + W^2); empty until both shares arrive.
  const std::vector<Point>& results() const { return results_; }
  std::optional<Verdict> verdict() const { return verdict_; }
  std::optional<Reveal> reveal() const { return reveal_; }

  bool sent(int role, Round round) const;
  // Round the role is expected to send next, if any.
  std::optional<Round> next_round(int role) const;
  // Roles that currently owe a frame.
  std::vector<int> roles_owing() const;
  // Latest protocol step completed by both parties: 0 before keys, then
  // 5, 7, 9, 10, 11, 12, 14 (verdict), 16 (reveal checked).
  int progress() const;
  bool complete() const { return reveal_.has_value(); }

 private:
  Frame verify(ByteSpan raw) const;
  void record(const Frame& frame);
  void check_order(const Frame& frame) const;
  void check_body(const Frame& frame, ByteSpan raw) const;
  sigma::ProofContext context(const Frame& frame, std::uint32_t index) const;

  CompareConfig config_;
  std::array<std::optional<Point>, 2> keys_;
  std::array<std::vector<elgamal::Ciphertext>, 2> bits_;
  std::vector<elgamal::Ciphertext> circuit_;
  std::array<std::vector<elgamal::Ciphertext>, 2> shuffled_;
  std::array<std::vector<elgamal::Ciphertext>, 2> blinded_;
  std::array<std::vector<Point>, 2> shares_;
  std::vector<Point> results_;
  std::optional<Verdict> verdict_;
  std::optional<Reveal> reveal_;
  std::array<std::array<bool, 16>, 2> sent_{};
  Frame last_;
};

}  // namespace deepocean::compare

#endif  // DEEPOCEAN_COMPARE_TRANSCRIPT_H_
