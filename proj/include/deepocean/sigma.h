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

#ifndef DEEPOCEAN_SIGMA_H_
#define DEEPOCEAN_SIGMA_H_

// Non-interactive sigma protocols (strong Fiat-Shamir) and Schnorr
// signatures.
//
// Every challenge hashes a domain tag, the ProofContext, the full public
// statement and the prover commitments. A proof produced under one context
// never verifies under another.

#include <cstdint>
#include <span>
#include <vector>

#include "deepocean/elgamal.h"
#include "deepocean/group.h"

namespace deepocean::sigma {

// Binds a proof to a protocol position.
struct ProofContext {
  Bytes session_id;
  std::uint32_t round = 0;
  std::uint32_t index = 0;
  Point sender;  // prover's identity key

  Bytes to_bytes() const;
  static ProofContext from_bytes(ByteSpan bytes);
  void append_to(Transcript& t) const;
};

// Knowledge of x with p = x*g.
struct DlogProof {
  static constexpr std::size_t kSize = Point::kSize + Scalar::kSize;

  Point commitment;  // z*g
  Scalar response;   // z + c*x

  Bytes to_bytes() const;
  static DlogProof from_bytes(ByteSpan bytes);
};

DlogProof prove_dlog(const Scalar& x, const Point& g, const Point& p,
                     const ProofContext& ctx, Rng& rng);
bool verify_dlog(const DlogProof& proof, const Point& g, const Point& p,
                 const ProofContext& ctx);

// The same x links every (bases[i], points[i]) pair.
struct EqLogProof {
  std::vector<Point> commitments;  // z*bases[i]
  Scalar response;

  Bytes to_bytes() const;
  static EqLogProof from_bytes(ByteSpan bytes);
  static EqLogProof read(ByteReader& r);
  void write(ByteWriter& w) const;
};

// Throws Error(kMalformedStatement) when the lists differ in length or have
// fewer than two entries.
EqLogProof prove_eq_logs(const Scalar& x, std::span<const Point> bases,
                         std::span<const Point> points, const ProofContext& ctx,
                         Rng& rng);
// Statement length errors throw as above; a proof of the wrong arity is
// simply rejected.
bool verify_eq_logs(const EqLogProof& proof, std::span<const Point> bases,
                    std::span<const Point> points, const ProofContext& ctx);

// Disjunctive proof that ct = (C, D) encrypts 0 or 1 under pk.
//
// Branch 1 proves log_G(D) = log_P(C - G) (the m = 1 case), branch 2 proves
// log_G(D) = log_P(C) (the m = 0 case). The prover simulates the false
// branch and the challenge splits as c = d1 + d2.
struct BitProof {
  static constexpr std::size_t kSize = 4 * Point::kSize + 4 * Scalar::kSize;

  Point a1, b1, a2, b2;
  Scalar r1, d1, r2, d2;

  Bytes to_bytes() const;
  static BitProof from_bytes(ByteSpan bytes);
};

// Throws Error(kInvalidArgument) when m is not 0 or 1.
BitProof prove_bit(unsigned m, const Scalar& r, const elgamal::Ciphertext& ct,
                   const Point& pk, const ProofContext& ctx, Rng& rng);
bool verify_bit(const BitProof& proof, const elgamal::Ciphertext& ct,
                const Point& pk, const ProofContext& ctx);

// Challenge a honest BitProof splits into d1 + d2.
Scalar bit_challenge(const BitProof& proof, const elgamal::Ciphertext& ct,
                     const Point& pk, const ProofContext& ctx);

struct Signature {
  static constexpr std::size_t kSize = Point::kSize + Scalar::kSize;

  Point commitment;
  Scalar response;

  Bytes to_bytes() const;
  static Signature from_bytes(ByteSpan bytes);
};

Signature sign(const Scalar& sk, ByteSpan message, Rng& rng);
bool verify_sig(const Point& pk, ByteSpan message, const Signature& sig);

}  // namespace deepocean::sigma

#endif  // DEEPOCEAN_SIGMA_H_
