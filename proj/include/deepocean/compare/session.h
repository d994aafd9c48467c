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

#ifndef DEEPOCEAN_COMPARE_SESSION_H_
#define DEEPOCEAN_COMPARE_SESSION_H_

// One party's side of a comparison. Message driven and transport agnostic:
// frames in, frames out. Not thread-safe; distinct sessions are independent.

#include <optional>
#include <utility>
#include <vector>

#include "deepocean/compare.h"
#include "deepocean/compare/frame.h"
#include "deepocean/compare/transcript.h"
#include "deepocean/elgamal.h"
#include "deepocean/rng.h"

namespace deepocean::compare {

struct StepResult {
  std::vector<Bytes> outbound;
  std::optional<Verdict> verdict;  // set on the step that completes decryption
};

class CompareSession {
 public:
  // Throws Error(kInvalidOrderSize) unless 0 < own_size < 2^k. Returns the
  // session and its keys frame.
  static std::pair<CompareSession, Bytes> start(CompareConfig config,
                                                const Scalar& identity_sk,
                                                std::uint64_t own_size, Rng& rng,
                                                Clock::time_point now = Clock::now());

  // Verifies a peer frame and emits whatever this party can now send.
  // Throws the PublicTranscript errors, and Error(kSessionExpired) when the
  // peer has been silent longer than the configured timeout.
  StepResult handle_message(ByteSpan frame, Rng& rng, Clock::time_point now = Clock::now());

  // Throws Error(kProtocolOrderViolation) unless this party is the revealer.
  Reveal make_reveal() const;
  // Signed reveal frame; also recorded in the local transcript.
  Bytes make_reveal_frame(Rng& rng);
  // Checks a reveal frame from the peer. Throws Error(kBadReveal) on failure.
  Reveal accept_reveal(ByteSpan frame);

  bool expired(Clock::time_point now) const;

  int role() const { return config_.role; }
  const CompareConfig& config() const { return config_; }
  const PublicTranscript& transcript() const { return transcript_; }
  std::optional<Verdict> verdict() const { return transcript_.verdict(); }
  bool is_revealer() const;
  const std::vector<std::uint8_t>& own_bits() const { return bits_; }
  const std::vector<Scalar>& bit_randomness() const { return bit_randomness_; }

 private:
  CompareSession(CompareConfig config, const Scalar& identity_sk, std::uint64_t size,
                 Rng& rng, Clock::time_point now);

  Bytes emit(Round round, const FrameBody& body, Rng& rng);
  Bytes make_frame(Round round, Rng& rng);
  sigma::ProofContext context(Round round, std::uint32_t index) const;

  CompareConfig config_;
  Scalar identity_sk_;
  std::uint64_t size_;
  std::vector<std::uint8_t> bits_;
  std::vector<Scalar> bit_randomness_;
  elgamal::KeyPair session_keys_;
  std::vector<Scalar> blinding_;
  PublicTranscript transcript_;
  Clock::time_point last_activity_;
};

}  // namespace deepocean::compare

#endif  // DEEPOCEAN_COMPARE_SESSION_H_
