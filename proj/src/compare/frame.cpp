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

#include "deepocean/compare/frame.h"

#include "deepocean/errors.h"

namespace deepocean::compare {

namespace {

// Vectors on the wire are bounded by the maximum bit width.
constexpr std::uint16_t kMaxCount = kMaxBitWidth;

std::uint16_t read_count(ByteReader& r) {
  const std::uint16_t n = r.u16();
  if (n == 0 || n > kMaxCount) throw DecodeError("frame: bad vector length");
  return n;
}

void write_body(ByteWriter& w, const FrameBody& body) {
  std::visit(
      [&w](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, KeysBody>) {
          w.put(b.session_key).put(b.proof.commitment).put(b.proof.response);
        } else if constexpr (std::is_same_v<T, BitsBody>) {
          w.put_u16(static_cast<std::uint16_t>(b.cts.size()));
          for (std::size_t j = 0; j < b.cts.size(); ++j) {
            w.put(b.cts[j].a).put(b.cts[j].b).put_raw(b.proofs.at(j).to_bytes());
          }
        } else if constexpr (std::is_same_v<T, ShuffleBody>) {
          w.put_u16(static_cast<std::uint16_t>(b.outputs.size()));
          for (const auto& ct : b.outputs) w.put(ct.a).put(ct.b);
          w.put_blob(b.proof);
        } else if constexpr (std::is_same_v<T, BlindBody>) {
          w.put_u16(static_cast<std::uint16_t>(b.blinded.size()));
          for (std::size_t j = 0; j < b.blinded.size(); ++j) {
            w.put(b.blinded[j].a).put(b.blinded[j].b);
            b.proofs.at(j).write(w);
          }
        } else if constexpr (std::is_same_v<T, SharesBody>) {
          w.put_u16(static_cast<std::uint16_t>(b.shares.size()));
          for (std::size_t j = 0; j < b.shares.size(); ++j) {
            w.put(b.shares[j]);
            b.proofs.at(j).write(w);
          }
        } else {
          w.put_u64(b.size).put(b.aggregate_randomness);
        }
      },
      body);
}

FrameBody read_body(ByteReader& r, Round round) {
  switch (round) {
    case Round::kKeys: {
      KeysBody b;
      b.session_key = r.point();
      b.proof.commitment = r.point();
      b.proof.response = r.scalar();
      return b;
    }
    case Round::kBits: {
      BitsBody b;
      const std::uint16_t n = read_count(r);
      for (std::uint16_t j = 0; j < n; ++j) {
        elgamal::Ciphertext ct;
        ct.a = r.point();
        ct.b = r.point();
        b.cts.push_back(ct);
        b.proofs.push_back(sigma::BitProof::from_bytes(r.raw(sigma::BitProof::kSize)));
      }
      return b;
    }
    case Round::kShuffle1:
    case Round::kShuffle2: {
      ShuffleBody b;
      const std::uint16_t n = read_count(r);
      for (std::uint16_t j = 0; j < n; ++j) {
        elgamal::Ciphertext ct;
        ct.a = r.point();
        ct.b = r.point();
        b.outputs.push_back(ct);
      }
      ByteSpan proof = r.blob();
      b.proof.assign(proof.begin(), proof.end());
      return b;
    }
    case Round::kBlind: {
      BlindBody b;
      const std::uint16_t n = read_count(r);
      for (std::uint16_t j = 0; j < n; ++j) {
        elgamal::Ciphertext ct;
        ct.a = r.point();
        ct.b = r.point();
        b.blinded.push_back(ct);
        b.proofs.push_back(sigma::EqLogProof::read(r));
      }
      return b;
    }
    case Round::kShares: {
      SharesBody b;
      const std::uint16_t n = read_count(r);
      for (std::uint16_t j = 0; j < n; ++j) {
        b.shares.push_back(r.point());
        b.proofs.push_back(sigma::EqLogProof::read(r));
      }
      return b;
    }
    case Round::kReveal: {
      RevealBody b;
      b.size = r.u64();
      b.aggregate_randomness = r.scalar();
      return b;
    }
  }
  throw DecodeError("frame: unknown round");
}

bool body_matches_round(const FrameBody& body, Round round) {
  switch (round) {
    case Round::kKeys: return std::holds_alternative<KeysBody>(body);
    case Round::kBits: return std::holds_alternative<BitsBody>(body);
    case Round::kShuffle1:
    case Round::kShuffle2: return std::holds_alternative<ShuffleBody>(body);
    case Round::kBlind: return std::holds_alternative<BlindBody>(body);
    case Round::kShares: return std::holds_alternative<SharesBody>(body);
    case Round::kReveal: return std::holds_alternative<RevealBody>(body);
  }
  return false;
}

}  // namespace

Bytes encode_frame(ByteSpan session_id, Round round, int role, const FrameBody& body,
                   const Scalar& identity_sk, Rng& rng) {
  if (!body_matches_round(body, round)) {
    throw Error(ErrorCode::kInvalidArgument, "frame body does not match round");
  }
  ByteWriter w;
  w.put_u8(kFrameVersion)
      .put_blob(session_id)
      .put_u8(static_cast<std::uint8_t>(round))
      .put_u8(static_cast<std::uint8_t>(role));
  write_body(w, body);
  Bytes out = std::move(w).bytes();
  const sigma::Signature sig = sigma::sign(identity_sk, out, rng);
  const Bytes sig_bytes = sig.to_bytes();
  out.insert(out.end(), sig_bytes.begin(), sig_bytes.end());
  return out;
}

Frame decode_frame(ByteSpan raw) {
  if (raw.size() < sigma::Signature::kSize) throw DecodeError("frame: too short");
  const ByteSpan signed_part = raw.first(raw.size() - sigma::Signature::kSize);
  ByteReader r(signed_part);
  if (r.u8() != kFrameVersion) throw DecodeError("frame: unsupported version");
  Frame f;
  ByteSpan sid = r.blob();
  f.session_id.assign(sid.begin(), sid.end());
  f.round = round_from_u8(r.u8());
  f.role = r.u8();
  if (f.role != 1 && f.role != 2) throw DecodeError("frame: bad role");
  f.body = read_body(r, f.round);
  r.expect_end();
  f.signature = sigma::Signature::from_bytes(raw.last(sigma::Signature::kSize));
  f.signed_part.assign(signed_part.begin(), signed_part.end());
  return f;
}

bool verify_frame_signature(const Frame& frame, const Point& identity_key) {
  return sigma::verify_sig(identity_key, frame.signed_part, frame.signature);
}

}  // namespace deepocean::compare
