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

#include "deepocean/elgamal.h"

#include "deepocean/errors.h"

namespace deepocean::elgamal {

KeyPair KeyPair::generate(Rng& rng) {
  return from_secret(Scalar::random_nonzero(rng));
}

KeyPair KeyPair::from_secret(const Scalar& sk) {
  if (sk.is_zero()) throw Error(ErrorCode::kInvalidArgument, "secret key is zero");
  return {sk, Point::mul_base(sk)};
}

CombinedKey CombinedKey::combine(const Point& p1, const Point& p2) {
  return {p1 + p2, {p1, p2}};
}

Bytes Ciphertext::to_bytes() const {
  return ByteWriter().put(a).put(b).bytes();
}

Ciphertext Ciphertext::from_bytes(ByteSpan bytes) {
  if (bytes.size() != kSize) throw DecodeError("ciphertext: expected 64 bytes");
  ByteReader r(bytes);
  Ciphertext ct;
  ct.a = r.point();
  ct.b = r.point();
  return ct;
}

Ciphertext encrypt(const Scalar& m, const Scalar& r, const Point& pk) {
  if (r.is_zero()) throw Error(ErrorCode::kInvalidArgument, "encrypt: r must be nonzero");
  return {Point::mul_base(m) + r * pk, Point::mul_base(r)};
}

Ciphertext rerandomize(const Ciphertext& ct, const Scalar& r, const Point& pk) {
  if (r.is_zero()) {
    throw Error(ErrorCode::kInvalidArgument, "rerandomize: r must be nonzero");
  }
  return {ct.a + r * pk, ct.b + Point::mul_base(r)};
}

Point decrypt_point(const Ciphertext& ct, const Scalar& sk) {
  return ct.a - sk * ct.b;
}

Point partial_decrypt(const Point& b_sum, const Scalar& sk_i) {
  return sk_i * b_sum;
}

std::optional<std::uint64_t> small_dlog(const Point& p, std::uint64_t bound) {
  Point acc;
  for (std::uint64_t m = 0; m < bound; ++m) {
    if (acc == p) return m;
    acc += Point::generator();
  }
  return std::nullopt;
}

}  // namespace deepocean::elgamal
