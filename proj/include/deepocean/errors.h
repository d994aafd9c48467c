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

#ifndef DEEPOCEAN_ERRORS_H_
#define DEEPOCEAN_ERRORS_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace deepocean {

enum class ErrorCode {
  kDecode,
  kInvalidArgument,
  kMalformedStatement,
  // compare
  kInvalidOrderSize,
  kProtocolOrderViolation,
  kBadProof,
  kSessionExpired,
  kBadSignature,
  kStaleRound,
  kBadReveal,
  // relay
  kDuplicateKey,
  kBannedKey,
  kUnknownUser,
  kSameAssetPair,
  kUnknownSession,
  kNotYourSession,
  kUnknownOrder,
  kInvalidEvidence,
  kStalePrice,
  kStorage,
  // client
  kSizeOutOfRange,
  kNotRegistered,
  kDecisionExpired,
  kReferenceUnavailable,
  kPeerPunished,
  kTransport,
};

std::string_view error_code_name(ErrorCode code);

// Inverse of error_code_name; unknown names map to kInvalidArgument.
ErrorCode error_code_from_name(std::string_view name);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DecodeError : public Error {
 public:
  explicit DecodeError(const std::string& what)
      : Error(ErrorCode::kDecode, what) {}
};

// A peer message whose embedded proof failed. `evidence` is the offending
// signed frame, suitable for a misbehavior report.
class BadProofError : public Error {
 public:
  BadProofError(std::uint32_t round, std::uint32_t index,
                std::vector<std::uint8_t> evidence, const std::string& what)
      : Error(ErrorCode::kBadProof, what),
        round_(round),
        index_(index),
        evidence_(std::move(evidence)) {}

  std::uint32_t round() const noexcept { return round_; }
  std::uint32_t index() const noexcept { return index_; }
  const std::vector<std::uint8_t>& evidence() const noexcept {
    return evidence_;
  }

 private:
  std::uint32_t round_;
  std::uint32_t index_;
  std::vector<std::uint8_t> evidence_;
};

}  // namespace deepocean

#endif  // DEEPOCEAN_ERRORS_H_
