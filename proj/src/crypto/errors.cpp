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

#include "deepocean/errors.h"

#include <array>
#include <utility>

namespace deepocean {

namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 26> kNames = {{
    {ErrorCode::kDecode, "DecodeError"},
    {ErrorCode::kInvalidArgument, "InvalidArgument"},
    {ErrorCode::kMalformedStatement, "MalformedStatement"},
    {ErrorCode::kInvalidOrderSize, "InvalidOrderSize"},
    {ErrorCode::kProtocolOrderViolation, "ProtocolOrderViolation"},
    {ErrorCode::kBadProof, "BadProof"},
    {ErrorCode::kSessionExpired, "SessionExpired"},
    {ErrorCode::kBadSignature, "BadSignature"},
    {ErrorCode::kStaleRound, "StaleRound"},
    {ErrorCode::kBadReveal, "BadReveal"},
    {ErrorCode::kDuplicateKey, "DuplicateKey"},
    {ErrorCode::kBannedKey, "BannedKey"},
    {ErrorCode::kUnknownUser, "UnknownUser"},
    {ErrorCode::kSameAssetPair, "SameAssetPair"},
    {ErrorCode::kUnknownSession, "UnknownSession"},
    {ErrorCode::kNotYourSession, "NotYourSession"},
    {ErrorCode::kUnknownOrder, "UnknownOrder"},
    {ErrorCode::kInvalidEvidence, "InvalidEvidence"},
    {ErrorCode::kStalePrice, "StalePrice"},
    {ErrorCode::kStorage, "StorageError"},
    {ErrorCode::kSizeOutOfRange, "SizeOutOfRange"},
    {ErrorCode::kNotRegistered, "NotRegistered"},
    {ErrorCode::kDecisionExpired, "DecisionExpired"},
    {ErrorCode::kReferenceUnavailable, "ReferenceUnavailable"},
    {ErrorCode::kPeerPunished, "PeerPunished"},
    {ErrorCode::kTransport, "TransportError"},
}};

}  // namespace

std::string_view error_code_name(ErrorCode code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "Unknown";
}

ErrorCode error_code_from_name(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return ErrorCode::kInvalidArgument;
}

}  // namespace deepocean
