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

#ifndef DEEPOCEAN_COMPARE_FRAME_H_
#define DEEPOCEAN_COMPARE_FRAME_H_

// Canonical binary records exchanged by the comparison engine.
//
//   u8   version (=1)
//   u32  session id length, session id bytes
//   u8   round
//   u8   role
//   ...  round-specific body (vectors carry a u16 count)
//   64B  Schnorr signature by the sender's identity key over all of the above

#include <variant>
#include <vector>

#include "deepocean/compare.h"
#include "deepocean/sigma.h"

namespace deepocean::compare {

inline constexpr std::uint8_t kFrameVersion = 1;

struct KeysBody {
  Point session_key;  // P_i
  sigma::DlogProof proof;
};

struct BitsBody {
  std::vector<elgamal::Ciphertext> cts;  // (A_ij, B_ij)
  std::vector<sigma::BitProof> proofs;
};

struct ShuffleBody {
  std::vector<elgamal::Ciphertext> outputs;
  Bytes proof;
};

struct BlindBody {
  std::vector<elgamal::Ciphertext> blinded;  // (V_j^i, U_j^i)
  std::vector<sigma::EqLogProof> proofs;
};

struct SharesBody {
  std::vector<Point> shares;  // W_j^i
  std::vector<sigma::EqLogProof> proofs;
};

struct RevealBody {
  std::uint64_t size = 0;
  Scalar aggregate_randomness;
};

using FrameBody =
    std::variant<KeysBody, BitsBody, ShuffleBody, BlindBody, SharesBody, RevealBody>;

struct Frame {
  Bytes session_id;
  Round round = Round::kKeys;
  int role = 1;
  FrameBody body;
  sigma::Signature signature;
  Bytes signed_part;  // everything the signature covers
};

Bytes encode_frame(ByteSpan session_id, Round round, int role, const FrameBody& body,
                   const Scalar& identity_sk, Rng& rng);

// Structural decode only; the signature is not checked. Throws DecodeError.
Frame decode_frame(ByteSpan raw);

bool verify_frame_signature(const Frame& frame, const Point& identity_key);

}  // namespace deepocean::compare

#endif  // DEEPOCEAN_COMPARE_FRAME_H_
