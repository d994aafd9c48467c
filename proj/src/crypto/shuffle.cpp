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

#include "deepocean/shuffle.h"

#include <algorithm>
#include <limits>
#include <numeric>

#include "deepocean/errors.h"

namespace deepocean::shuffle {

namespace {

using elgamal::Ciphertext;

constexpr std::string_view kGeneratorTag = "deepocean/v1/shuffle-gen";
constexpr std::string_view kElementChallengeTag = "deepocean/v1/shuffle-u";
constexpr std::string_view kStatementTag = "deepocean/v1/shuffle-stmt";
constexpr std::string_view kChallengeTag = "deepocean/v1/shuffle-c";

// Upper bound on vector length accepted from the wire.
constexpr std::uint32_t kMaxElements = 4096;

std::uint64_t uniform_below(std::uint64_t bound, Rng& rng) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::array<std::uint8_t, 8> buf;
    rng.fill(buf);
    std::uint64_t v = 0;
    for (std::uint8_t b : buf) v = (v << 8) | b;
    if (v < limit) return v % bound;
  }
}

std::vector<Point> element_generators(std::size_t n) {
  std::vector<Point> gens;
  gens.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Bytes idx = ByteWriter().put_u32(static_cast<std::uint32_t>(i)).bytes();
    gens.push_back(Point::hash_to_point(kGeneratorTag, idx));
  }
  return gens;
}

void append_ciphertexts(Transcript& t, const std::vector<Ciphertext>& cts) {
  t.append_u64(cts.size());
  for (const Ciphertext& ct : cts) t.append(ct.a).append(ct.b);
}

// Per-element challenges u_j, bound to the statement and the permutation
// commitment.
std::vector<Scalar> element_challenges(const ShuffleInstance& inst,
                                       const std::vector<Point>& perm_commitments,
                                       const sigma::ProofContext& ctx) {
  Transcript t;
  t.append(kProtocolVersion);
  ctx.append_to(t);
  t.append(inst.pk);
  append_ciphertexts(t, inst.inputs);
  append_ciphertexts(t, inst.outputs);
  for (const Point& c : perm_commitments) t.append(c);
  const Scalar seed = hash_to_scalar(kStatementTag, t);

  std::vector<Scalar> u;
  u.reserve(inst.inputs.size());
  for (std::size_t j = 0; j < inst.inputs.size(); ++j) {
    Transcript tj;
    tj.append(seed).append_u64(j);
    u.push_back(hash_to_scalar(kElementChallengeTag, tj));
  }
  return u;
}

struct Commitments {
  Point t1, t2, t3, t41, t42;
  std::vector<Point> t_hat;
};

struct Responses {
  Scalar s1, s2, s3, s4;
  std::vector<Scalar> s_hat;
  std::vector<Scalar> s_prime;
};

struct ProofBody {
  std::vector<Point> perm_commitments;   // c_j
  std::vector<Point> chain_commitments;  // c_hat_i
  Commitments t;
  Responses s;
};

Scalar final_challenge(const ShuffleInstance& inst, const ProofBody& body,
                       const sigma::ProofContext& ctx) {
  Transcript t;
  t.append(kProtocolVersion);
  ctx.append_to(t);
  t.append(inst.pk);
  append_ciphertexts(t, inst.inputs);
  append_ciphertexts(t, inst.outputs);
  for (const Point& c : body.perm_commitments) t.append(c);
  for (const Point& c : body.chain_commitments) t.append(c);
  t.append(body.t.t1).append(body.t.t2).append(body.t.t3);
  t.append(body.t.t41).append(body.t.t42);
  for (const Point& p : body.t.t_hat) t.append(p);
  return hash_to_scalar(kChallengeTag, t);
}

Bytes encode(const ProofBody& body) {
  ByteWriter w;
  w.put_u8(kAlgorithmPermutationCommitment);
  w.put_u32(static_cast<std::uint32_t>(body.perm_commitments.size()));
  for (const Point& p : body.perm_commitments) w.put(p);
  for (const Point& p : body.chain_commitments) w.put(p);
  w.put(body.t.t1).put(body.t.t2).put(body.t.t3).put(body.t.t41).put(body.t.t42);
  for (const Point& p : body.t.t_hat) w.put(p);
  w.put(body.s.s1).put(body.s.s2).put(body.s.s3).put(body.s.s4);
  for (const Scalar& s : body.s.s_hat) w.put(s);
  for (const Scalar& s : body.s.s_prime) w.put(s);
  return std::move(w).bytes();
}

ProofBody decode(ByteSpan bytes) {
  ByteReader r(bytes);
  if (r.u8() != kAlgorithmPermutationCommitment) {
    throw DecodeError("shuffle proof: unknown algorithm id");
  }
  const std::uint32_t n = r.u32();
  if (n == 0 || n > kMaxElements) throw DecodeError("shuffle proof: bad length");
  ProofBody body;
  auto read_points = [&](std::vector<Point>& out) {
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(r.point());
  };
  auto read_scalars = [&](std::vector<Scalar>& out) {
    out.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(r.scalar());
  };
  read_points(body.perm_commitments);
  read_points(body.chain_commitments);
  body.t.t1 = r.point();
  body.t.t2 = r.point();
  body.t.t3 = r.point();
  body.t.t41 = r.point();
  body.t.t42 = r.point();
  read_points(body.t.t_hat);
  body.s.s1 = r.scalar();
  body.s.s2 = r.scalar();
  body.s.s3 = r.scalar();
  body.s.s4 = r.scalar();
  read_scalars(body.s.s_hat);
  read_scalars(body.s.s_prime);
  r.expect_end();
  return body;
}

void check_witness(std::size_t n, const ShuffleWitness& w) {
  if (w.permutation.size() != n || w.rerand.size() != n) {
    throw Error(ErrorCode::kMalformedStatement, "shuffle witness: wrong length");
  }
  std::vector<bool> seen(n, false);
  for (std::uint32_t p : w.permutation) {
    if (p >= n || seen[p]) {
      throw Error(ErrorCode::kMalformedStatement, "shuffle witness: not a permutation");
    }
    seen[p] = true;
  }
  for (const Scalar& r : w.rerand) {
    if (r.is_zero()) {
      throw Error(ErrorCode::kMalformedStatement,
                  "shuffle witness: re-randomizer must be nonzero");
    }
  }
}

}  // namespace

ShuffleResult shuffle(const std::vector<Ciphertext>& inputs, const Point& pk,
                      Rng& rng) {
  if (inputs.empty()) {
    throw Error(ErrorCode::kMalformedStatement, "shuffle: empty input");
  }
  const std::size_t n = inputs.size();
  ShuffleWitness w;
  w.permutation.resize(n);
  std::iota(w.permutation.begin(), w.permutation.end(), 0u);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(w.permutation[i], w.permutation[uniform_below(i + 1, rng)]);
  }
  w.rerand.reserve(n);
  for (std::size_t i = 0; i < n; ++i) w.rerand.push_back(Scalar::random_nonzero(rng));
  std::vector<Ciphertext> outputs = apply_shuffle(inputs, w, pk);
  return {std::move(outputs), std::move(w)};
}

std::vector<Ciphertext> apply_shuffle(const std::vector<Ciphertext>& inputs,
                                      const ShuffleWitness& witness,
                                      const Point& pk) {
  if (inputs.empty()) {
    throw Error(ErrorCode::kMalformedStatement, "shuffle: empty input");
  }
  check_witness(inputs.size(), witness);
  std::vector<Ciphertext> out;
  out.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out.push_back(elgamal::rerandomize(inputs[witness.permutation[i]],
                                       witness.rerand[i], pk));
  }
  return out;
}

Bytes prove_shuffle(const ShuffleInstance& inst, const ShuffleWitness& witness,
                    const sigma::ProofContext& ctx, Rng& rng) {
  const std::size_t n = inst.inputs.size();
  if (n == 0 || inst.outputs.size() != n) {
    throw Error(ErrorCode::kMalformedStatement, "shuffle: length mismatch");
  }
  check_witness(n, witness);
  const auto& psi = witness.permutation;
  const Point& h = GeneratorSet::standard().h;
  const std::vector<Point> hs = element_generators(n);

  ProofBody body;

  // Column psi(i) of the permutation matrix holds h_i.
  std::vector<Scalar> r(n);
  body.perm_commitments.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = psi[i];
    r[j] = Scalar::random(rng);
    body.perm_commitments[j] = Point::mul_base(r[j]) + hs[i];
  }

  const std::vector<Scalar> u = element_challenges(inst, body.perm_commitments, ctx);
  std::vector<Scalar> u_perm(n);
  for (std::size_t i = 0; i < n; ++i) u_perm[i] = u[psi[i]];

  // c_hat_i = r_hat_i*g + u'_i * c_hat_{i-1}, starting from h.
  std::vector<Scalar> r_hat(n);
  body.chain_commitments.resize(n);
  Point prev = h;
  for (std::size_t i = 0; i < n; ++i) {
    r_hat[i] = Scalar::random(rng);
    body.chain_commitments[i] = Point::mul_base(r_hat[i]) + u_perm[i] * prev;
    prev = body.chain_commitments[i];
  }

  // v_i = prod_{l > i} u'_l
  std::vector<Scalar> v(n);
  v[n - 1] = Scalar::one();
  for (std::size_t i = n - 1; i > 0; --i) v[i - 1] = u_perm[i] * v[i];

  Scalar r_bar, r_chain, r_tilde, r_prime;
  for (std::size_t i = 0; i < n; ++i) {
    r_bar += r[i];
    r_chain += r_hat[i] * v[i];
    r_tilde += r[i] * u[i];
    r_prime += witness.rerand[i] * u_perm[i];
  }

  const Scalar w1 = Scalar::random(rng);
  const Scalar w2 = Scalar::random(rng);
  const Scalar w3 = Scalar::random(rng);
  const Scalar w4 = Scalar::random(rng);
  std::vector<Scalar> w_hat(n), w_prime(n);
  for (std::size_t i = 0; i < n; ++i) {
    w_hat[i] = Scalar::random(rng);
    w_prime[i] = Scalar::random(rng);
  }

  body.t.t1 = Point::mul_base(w1);
  body.t.t2 = Point::mul_base(w2);
  body.t.t3 = Point::mul_base(w3);
  body.t.t41 = -(w4 * inst.pk);
  body.t.t42 = -Point::mul_base(w4);
  body.t.t_hat.resize(n);
  prev = h;
  for (std::size_t i = 0; i < n; ++i) {
    body.t.t3 += w_prime[i] * hs[i];
    body.t.t41 += w_prime[i] * inst.outputs[i].a;
    body.t.t42 += w_prime[i] * inst.outputs[i].b;
    body.t.t_hat[i] = Point::mul_base(w_hat[i]) + w_prime[i] * prev;
    prev = body.chain_commitments[i];
  }

  const Scalar c = final_challenge(inst, body, ctx);
  body.s.s1 = w1 + c * r_bar;
  body.s.s2 = w2 + c * r_chain;
  body.s.s3 = w3 + c * r_tilde;
  body.s.s4 = w4 + c * r_prime;
  body.s.s_hat.resize(n);
  body.s.s_prime.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    body.s.s_hat[i] = w_hat[i] + c * r_hat[i];
    body.s.s_prime[i] = w_prime[i] + c * u_perm[i];
  }
  return encode(body);
}

bool verify_shuffle(const ShuffleInstance& inst, ByteSpan proof,
                    const sigma::ProofContext& ctx) {
  const std::size_t n = inst.inputs.size();
  if (n == 0 || inst.outputs.size() != n) return false;

  ProofBody body;
  try {
    body = decode(proof);
  } catch (const DecodeError&) {
    return false;
  }
  if (body.perm_commitments.size() != n) return false;

  const Point& h = GeneratorSet::standard().h;
  const std::vector<Point> hs = element_generators(n);
  const std::vector<Scalar> u = element_challenges(inst, body.perm_commitments, ctx);
  const Scalar c = final_challenge(inst, body, ctx);

  Point c_bar, c_tilde, a_prime, b_prime;
  Scalar u_prod = Scalar::one();
  for (std::size_t j = 0; j < n; ++j) {
    c_bar += body.perm_commitments[j] - hs[j];
    c_tilde += u[j] * body.perm_commitments[j];
    a_prime += u[j] * inst.inputs[j].a;
    b_prime += u[j] * inst.inputs[j].b;
    u_prod *= u[j];
  }
  const Point c_chain = body.chain_commitments[n - 1] - u_prod * h;

  if (Point::mul_base(body.s.s1) - c * c_bar != body.t.t1) return false;
  if (Point::mul_base(body.s.s2) - c * c_chain != body.t.t2) return false;

  Point t3 = Point::mul_base(body.s.s3) - c * c_tilde;
  Point t41 = -(body.s.s4 * inst.pk) - c * a_prime;
  Point t42 = -Point::mul_base(body.s.s4) - c * b_prime;
  Point prev = h;
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar& sp = body.s.s_prime[i];
    t3 += sp * hs[i];
    t41 += sp * inst.outputs[i].a;
    t42 += sp * inst.outputs[i].b;
    const Point t_hat = Point::mul_base(body.s.s_hat[i]) + sp * prev -
                        c * body.chain_commitments[i];
    if (t_hat != body.t.t_hat[i]) return false;
    prev = body.chain_commitments[i];
  }
  return t3 == body.t.t3 && t41 == body.t.t41 && t42 == body.t.t42;
}

}  // namespace deepocean::shuffle
