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

#include "deepocean/wire.h"

namespace deepocean::wire {

namespace {

Bytes as_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

const Json& field(const Json& j, std::string_view key) {
  if (!j.is_object()) throw DecodeError("expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw DecodeError("missing field '" + std::string(key) + "'");
  return *it;
}

}  // namespace

std::string canonical(const Json& j) {
  // nlohmann::json objects are std::map backed, so keys come out sorted.
  return j.dump(-1, ' ', false, Json::error_handler_t::strict);
}

std::string hex(const Point& p) { return to_hex(p.to_bytes()); }
std::string hex(ByteSpan bytes) { return to_hex(bytes); }

Bytes bytes_field(const Json& payload, std::string_view key) {
  const Json& v = field(payload, key);
  if (!v.is_string()) throw DecodeError("field '" + std::string(key) + "' is not a string");
  return from_hex(v.get<std::string>());
}

Point point_field(const Json& payload, std::string_view key) {
  return Point::from_bytes(bytes_field(payload, key));
}

std::string string_field(const Json& payload, std::string_view key) {
  const Json& v = field(payload, key);
  if (!v.is_string()) throw DecodeError("field '" + std::string(key) + "' is not a string");
  return v.get<std::string>();
}

std::uint64_t u64_field(const Json& payload, std::string_view key) {
  const Json& v = field(payload, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw DecodeError("field '" + std::string(key) + "' is not a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string Envelope::signing_bytes() const {
  Json j = {{"type", type}, {"seq", seq}, {"sender", hex(sender)}, {"payload", payload}};
  if (session_id) j["session_id"] = *session_id;
  return canonical(j);
}

std::string Envelope::to_line() const {
  Json j = Json::parse(signing_bytes());
  j["sig"] = hex(sig.to_bytes());
  return canonical(j);
}

Envelope Envelope::from_line(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::exception& e) {
    throw DecodeError(std::string("envelope: ") + e.what());
  }
  Envelope env;
  env.type = string_field(j, "type");
  env.seq = u64_field(j, "seq");
  env.sender = point_field(j, "sender");
  env.payload = field(j, "payload");
  if (!env.payload.is_object()) throw DecodeError("envelope: payload must be an object");
  if (auto it = j.find("session_id"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw DecodeError("envelope: session_id must be a string");
    env.session_id = it->get<std::string>();
  }
  env.sig = sigma::Signature::from_bytes(bytes_field(j, "sig"));
  return env;
}

bool Envelope::verify() const {
  if (sender.is_identity()) return false;
  return sigma::verify_sig(sender, as_bytes(signing_bytes()), sig);
}

Envelope seal(std::string_view type, std::optional<std::string> session_id, std::uint64_t seq,
              Json payload, const elgamal::KeyPair& identity, Rng& rng) {
  Envelope env;
  env.type = std::string(type);
  env.session_id = std::move(session_id);
  env.seq = seq;
  env.sender = identity.pk;
  env.payload = std::move(payload);
  env.sig = sigma::sign(identity.sk, as_bytes(env.signing_bytes()), rng);
  return env;
}

Json MatchTicket::unsigned_json() const {
  return {{"session_id", session_id},
          {"base", base},
          {"quote", quote},
          {"market_price", market_price.to_string()},
          {"role1", hex(role1)},
          {"role2", hex(role2)},
          {"order1", order1},
          {"order2", order2},
          {"bit_width", bit_width},
          {"issued_at_ms", issued_at_ms}};
}

Json MatchTicket::to_json() const {
  Json j = unsigned_json();
  j["relay_signature"] = hex(relay_signature.to_bytes());
  return j;
}

MatchTicket MatchTicket::from_json(const Json& j) {
  MatchTicket t;
  t.session_id = string_field(j, "session_id");
  t.base = string_field(j, "base");
  t.quote = string_field(j, "quote");
  try {
    t.market_price = Decimal::parse(string_field(j, "market_price"));
  } catch (const Error&) {
    throw DecodeError("ticket: bad market price");
  }
  t.role1 = point_field(j, "role1");
  t.role2 = point_field(j, "role2");
  t.order1 = string_field(j, "order1");
  t.order2 = string_field(j, "order2");
  t.bit_width = static_cast<unsigned>(u64_field(j, "bit_width"));
  t.issued_at_ms = static_cast<std::int64_t>(u64_field(j, "issued_at_ms"));
  t.relay_signature = sigma::Signature::from_bytes(bytes_field(j, "relay_signature"));
  return t;
}

void MatchTicket::sign(const Scalar& relay_sk, Rng& rng) {
  relay_signature = sigma::sign(relay_sk, as_bytes(canonical(unsigned_json())), rng);
}

bool MatchTicket::verify(const Point& relay_key) const {
  return sigma::verify_sig(relay_key, as_bytes(canonical(unsigned_json())), relay_signature);
}

int MatchTicket::role_of(const Point& key) const {
  if (key == role1) return 1;
  if (key == role2) return 2;
  return 0;
}

Json error_payload(ErrorCode code, std::string_view message, std::optional<std::uint64_t> ref_seq) {
  Json j = {{"code", std::string(error_code_name(code))}, {"message", std::string(message)}};
  if (ref_seq) j["ref_seq"] = *ref_seq;
  return j;
}

}  // namespace deepocean::wire
