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

#include "deepocean/sigma.h"

#include "deepocean/errors.h"

namespace deepocean::sigma {

namespace {

constexpr std::string_view kDlogTag = "deepocean/v1/dlog";
constexpr std::string_view kEqLogTag = "deepocean/v1/eqlog";
constexpr std::string_view kBitTag = "deepocean/v1/bit";
constexpr std::string_view kSigTag = "deepocean/v1/sig";

Transcript context_transcript(const ProofContext& ctx) {
  Transcript t;
  t.append(kProtocolVersion);
  ctx.append_to(t);
  return t;
}

Scalar dlog_challenge(const Point& g, const Point& p, const Point& a,
                      const ProofContext& ctx) {
  Transcript t = context_transcript(ctx);
  t.append(g).append(p).append(a);
  return hash_to_scalar(kDlogTag, t);
}

Scalar eqlog_challenge(std::span<const Point> bases, std::span<const Point> points,
                       std::span<const Point> commitments,
                       const ProofContext& ctx) {
  Transcript t = context_transcript(ctx);
  t.append_u64(bases.size());
  for (const Point& p : bases) t.append(p);
  for (const Point& p : points) t.append(p);
  for (const Point& p : commitments) t.append(p);
  return hash_to_scalar(kEqLogTag, t);
}

void check_eqlog_statement(std::span<const Point> bases,
                           std::span<const Point> points) {
  if (bases.size() != points.size()) {
    throw Error(ErrorCode::kMalformedStatement,
                "eq-log statement: bases and points differ in length");
  }
  if (bases.size() < 2) {
    throw Error(ErrorCode::kMalformedStatement,
                "eq-log statement: need at least two bases");
  }
}

}  // namespace

Bytes ProofContext::to_bytes() const {
  return ByteWriter().put_blob(session_id).put_u32(round).put_u32(index).put(sender).bytes();
}

ProofContext ProofContext::from_bytes(ByteSpan bytes) {
  ByteReader r(bytes);
  ProofContext ctx;
  ByteSpan sid = r.blob();
  ctx.session_id.assign(sid.begin(), sid.end());
  ctx.round = r.u32();
  ctx.index = r.u32();
  ctx.sender = r.point();
  r.expect_end();
  return ctx;
}

void ProofContext::append_to(Transcript& t) const {
  t.append(ByteSpan(session_id)).append_u64(round).append_u64(index).append(sender);
}

// ---------------------------------------------------------------------------

Bytes DlogProof::to_bytes() const {
  return ByteWriter().put(commitment).put(response).bytes();
}

DlogProof DlogProof::from_bytes(ByteSpan bytes) {
  ByteReader r(bytes);
  DlogProof p;
  p.commitment = r.point();
  p.response = r.scalar();
  r.expect_end();
  return p;
}

DlogProof prove_dlog(const Scalar& x, const Point& g, const Point& p,
                     const ProofContext& ctx, Rng& rng) {
  const Scalar z = Scalar::random_nonzero(rng);
  DlogProof proof;
  proof.commitment = z * g;
  const Scalar c = dlog_challenge(g, p, proof.commitment, ctx);
  proof.response = z + c * x;
  return proof;
}

bool verify_dlog(const DlogProof& proof, const Point& g, const Point& p,
                 const ProofContext& ctx) {
  const Scalar c = dlog_challenge(g, p, proof.commitment, ctx);
  return proof.response * g == proof.commitment + c * p;
}

// ---------------------------------------------------------------------------

void EqLogProof::write(ByteWriter& w) const {
  w.put_u16(static_cast<std::uint16_t>(commitments.size()));
  for (const Point& p : commitments) w.put(p);
  w.put(response);
}

EqLogProof EqLogProof::read(ByteReader& r) {
  EqLogProof proof;
  const std::uint16_t n = r.u16();
  proof.commitments.reserve(n);
  for (std::uint16_t i = 0; i < n; ++i) proof.commitments.push_back(r.point());
  proof.response = r.scalar();
  return proof;
}

Bytes EqLogProof::to_bytes() const {
  ByteWriter w;
  write(w);
  return std::move(w).bytes();
}

EqLogProof EqLogProof::from_bytes(ByteSpan bytes) {
  ByteReader r(bytes);
  EqLogProof proof = read(r);
  r.expect_end();
  return proof;
}

EqLogProof prove_eq_logs(const Scalar& x, std::span<const Point> bases,
                         std::span<const Point> points, const ProofContext& ctx,
                         Rng& rng) {
  check_eqlog_statement(bases, points);
  const Scalar z = Scalar::random_nonzero(rng);
  EqLogProof proof;
  proof.commitments.reserve(bases.size());
  for (const Point& base : bases) proof.commitments.push_back(z * base);
  const Scalar c = eqlog_challenge(bases, points, proof.commitments, ctx);
  proof.response = z + c * x;
  return proof;
}

bool verify_eq_logs(const EqLogProof& proof, std::span<const Point> bases,
                    std::span<const Point> points, const ProofContext& ctx) {
  check_eqlog_statement(bases, points);
  if (proof.commitments.size() != bases.size()) return false;
  const Scalar c = eqlog_challenge(bases, points, proof.commitments, ctx);
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (proof.response * bases[i] != proof.commitments[i] + c * points[i]) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

Bytes BitProof::to_bytes() const {
  return ByteWriter()
      .put(a1).put(b1).put(a2).put(b2)
      .put(r1).put(d1).put(r2).put(d2)
      .bytes();
}

BitProof BitProof::from_bytes(ByteSpan bytes) {
  ByteReader r(bytes);
  BitProof p;
  p.a1 = r.point();
  p.b1 = r.point();
  p.a2 = r.point();
  p.b2 = r.point();
  p.r1 = r.scalar();
  p.d1 = r.scalar();
  p.r2 = r.scalar();
  p.d2 = r.scalar();
  r.expect_end();
  return p;
}

Scalar bit_challenge(const BitProof& proof, const elgamal::Ciphertext& ct,
                     const Point& pk, const ProofContext& ctx) {
  Transcript t = context_transcript(ctx);
  t.append(Point::generator()).append(pk).append(ct.a).append(ct.b);
  t.append(proof.a1).append(proof.b1).append(proof.a2).append(proof.b2);
  return hash_to_scalar(kBitTag, t);
}

BitProof prove_bit(unsigned m, const Scalar& r, const elgamal::Ciphertext& ct,
                   const Point& pk, const ProofContext& ctx, Rng& rng) {
  if (m > 1) throw Error(ErrorCode::kInvalidArgument, "prove_bit: m must be 0 or 1");
  const Point& g = Point::generator();
  const Point& c_pt = ct.a;
  const Point& d_pt = ct.b;
  const Scalar w = Scalar::random_nonzero(rng);

  BitProof proof;
  if (m == 0) {
    proof.r1 = Scalar::random_nonzero(rng);
    proof.d1 = Scalar::random_nonzero(rng);
    proof.a1 = Point::mul_base(proof.r1) + proof.d1 * d_pt;
    proof.b1 = proof.r1 * pk + proof.d1 * (c_pt - g);
    proof.a2 = Point::mul_base(w);
    proof.b2 = w * pk;
  } else {
    proof.r2 = Scalar::random_nonzero(rng);
    proof.d2 = Scalar::random_nonzero(rng);
    proof.a1 = Point::mul_base(w);
    proof.b1 = w * pk;
    proof.a2 = Point::mul_base(proof.r2) + proof.d2 * d_pt;
    proof.b2 = proof.r2 * pk + proof.d2 * c_pt;
  }

  const Scalar c = bit_challenge(proof, ct, pk, ctx);
  if (m == 0) {
    proof.d2 = c - proof.d1;
    proof.r2 = w - r * proof.d2;
  } else {
    proof.d1 = c - proof.d2;
    proof.r1 = w - r * proof.d1;
  }
  return proof;
}

bool verify_bit(const BitProof& proof, const elgamal::Ciphertext& ct,
                const Point& pk, const ProofContext& ctx) {
  const Point& g = Point::generator();
  const Scalar c = bit_challenge(proof, ct, pk, ctx);
  if (c != proof.d1 + proof.d2) return false;
  if (proof.a1 != Point::mul_base(proof.r1) + proof.d1 * ct.b) return false;
  if (proof.b1 != proof.r1 * pk + proof.d1 * (ct.a - g)) return false;
  if (proof.a2 != Point::mul_base(proof.r2) + proof.d2 * ct.b) return false;
  if (proof.b2 != proof.r2 * pk + proof.d2 * ct.a) return false;
  return true;
}

// ---------------------------------------------------------------------------

Bytes Signature::to_bytes() const {
  return ByteWriter().put(commitment).put(response).bytes();
}

Signature Signature::from_bytes(ByteSpan bytes) {
  ByteReader r(bytes);
  Signature s;
  s.commitment = r.point();
  s.response = r.scalar();
  r.expect_end();
  return s;
}

namespace {

Scalar sig_challenge(const Point& pk, const Point& commitment, ByteSpan message) {
  Transcript t;
  t.append(kProtocolVersion).append(pk).append(commitment).append(message);
  return hash_to_scalar(kSigTag, t);
}

}  // namespace

Signature sign(const Scalar& sk, ByteSpan message, Rng& rng) {
  const Scalar k = Scalar::random_nonzero(rng);
  Signature sig;
  sig.commitment = Point::mul_base(k);
  const Point pk = Point::mul_base(sk);
  sig.response = k + sig_challenge(pk, sig.commitment, message) * sk;
  return sig;
}

bool verify_sig(const Point& pk, ByteSpan message, const Signature& sig) {
  if (pk.is_identity()) return false;
  const Scalar e = sig_challenge(pk, sig.commitment, message);
  return Point::mul_base(sig.response) == sig.commitment + e * pk;
}

}  // namespace deepocean::sigma
