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

#ifndef DEEPOCEAN_WIRE_H_
#define DEEPOCEAN_WIRE_H_

// Relay wire protocol: newline-delimited JSON envelopes
//
//   {type, session_id?, seq, sender, payload, sig}
//
// sender is the hex identity key; sig is a Schnorr signature over the
// canonical serialization (sorted keys, no whitespace) of the envelope
// without its sig field. Cryptographic payload fields are hex.

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "deepocean/decimal.h"
#include "deepocean/elgamal.h"
#include "deepocean/errors.h"
#include "deepocean/rng.h"
#include "deepocean/sigma.h"

namespace deepocean::wire {

using Json = nlohmann::json;

namespace msg {
inline constexpr std::string_view kRegister = "REGISTER";
inline constexpr std::string_view kOrder = "ORDER";
inline constexpr std::string_view kOrderAck = "ORDER_ACK";
inline constexpr std::string_view kCancel = "CANCEL";
inline constexpr std::string_view kMatchTicket = "MATCH_TICKET";
inline constexpr std::string_view kConfirm = "CONFIRM";
inline constexpr std::string_view kSessionStart = "SESSION_START";
inline constexpr std::string_view kRound = "ROUND";
inline constexpr std::string_view kAbort = "ABORT";
inline constexpr std::string_view kPunishNotice = "PUNISH_NOTICE";
inline constexpr std::string_view kVerdict = "VERDICT";
inline constexpr std::string_view kReveal = "REVEAL";
inline constexpr std::string_view kSettlement = "SETTLEMENT_INSTRUCTION";
inline constexpr std::string_view kError = "ERROR";
}  // namespace msg

struct Envelope {
  std::string type;
  std::optional<std::string> session_id;
  std::uint64_t seq = 0;
  Point sender;
  Json payload = Json::object();
  sigma::Signature sig;

  // The bytes the signature covers.
  std::string signing_bytes() const;
  // Canonical line without the trailing newline.
  std::string to_line() const;
  // Throws DecodeError on malformed JSON or fields.
  static Envelope from_line(std::string_view line);

  bool verify() const;
};

// Serialization with sorted keys and no whitespace.
std::string canonical(const Json& j);

Envelope seal(std::string_view type, std::optional<std::string> session_id, std::uint64_t seq,
              Json payload, const elgamal::KeyPair& identity, Rng& rng);

// Hex helpers for payload fields. The readers throw DecodeError.
std::string hex(const Point& p);
std::string hex(ByteSpan bytes);
Point point_field(const Json& payload, std::string_view key);
Bytes bytes_field(const Json& payload, std::string_view key);
std::string string_field(const Json& payload, std::string_view key);
std::uint64_t u64_field(const Json& payload, std::string_view key);

// Assigned by the relay when two orders meet; both parties receive the same
// ticket. role1 is the buy side of the instrument (buying base, paying quote).
struct MatchTicket {
  std::string session_id;
  std::string base;
  std::string quote;
  Decimal market_price;
  Point role1;
  Point role2;
  std::string order1;
  std::string order2;
  unsigned bit_width = 64;
  std::int64_t issued_at_ms = 0;
  sigma::Signature relay_signature;

  Json unsigned_json() const;
  Json to_json() const;
  static MatchTicket from_json(const Json& j);
  void sign(const Scalar& relay_sk, Rng& rng);
  bool verify(const Point& relay_key) const;

  int role_of(const Point& key) const;  // 0 when not a party
  const std::string& order_of(int role) const { return role == 1 ? order1 : order2; }
};

// Error payload shape shared by relay and client.
Json error_payload(ErrorCode code, std::string_view message,
                   std::optional<std::uint64_t> ref_seq = std::nullopt);

}  // namespace deepocean::wire

#endif  // DEEPOCEAN_WIRE_H_
