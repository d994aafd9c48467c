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

#ifndef DEEPOCEAN_ELGAMAL_H_
#define DEEPOCEAN_ELGAMAL_H_

// Additive EC ElGamal with two-party combined keys.
//
//   encrypt(m, r, P) = (m*G + r*P, r*G)
//
// Decryption recovers m*G only; the protocol needs nothing beyond the
// identity test. small_dlog() is a linear-scan helper for tests.

#include <cstdint>
#include <optional>
#include <vector>

#include "deepocean/group.h"

namespace deepocean::elgamal {

struct KeyPair {
  Scalar sk;
  Point pk;

  static KeyPair generate(Rng& rng);
  // Throws Error(kInvalidArgument) for sk == 0.
  static KeyPair from_secret(const Scalar& sk);
};

struct CombinedKey {
  Point pk;
  std::vector<Point> parts;

  static CombinedKey combine(const Point& p1, const Point& p2);
};

struct Ciphertext {
  static constexpr std::size_t kSize = 2 * Point::kSize;

  Point a;  // m*G + r*P
  Point b;  // r*G

  Bytes to_bytes() const;
  static Ciphertext from_bytes(ByteSpan bytes);

  friend Ciphertext operator+(const Ciphertext& x, const Ciphertext& y) {
    return {x.a + y.a, x.b + y.b};
  }
  friend Ciphertext operator-(const Ciphertext& x, const Ciphertext& y) {
    return {x.a - y.a, x.b - y.b};
  }
  friend Ciphertext operator*(const Scalar& k, const Ciphertext& c) {
    return {k * c.a, k * c.b};
  }
  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

// Throws Error(kInvalidArgument) for r == 0.
Ciphertext encrypt(const Scalar& m, const Scalar& r, const Point& pk);

// Adds an encryption of zero under fresh randomness r (r != 0).
Ciphertext rerandomize(const Ciphertext& ct, const Scalar& r, const Point& pk);

// a - sk*b = m*G.
Point decrypt_point(const Ciphertext& ct, const Scalar& sk);

// sk_i * b_sum. Subtracting every party's share from the a-component
// completes decryption under the combined key.
Point partial_decrypt(const Point& b_sum, const Scalar& sk_i);

inline bool is_identity(const Point& p) { return p.is_identity(); }

// Finds m in [0, bound) with m*G == p by linear scan.
std::optional<std::uint64_t> small_dlog(const Point& p,
                                        std::uint64_t bound = 1u << 16);

}  // namespace deepocean::elgamal

#endif  // DEEPOCEAN_ELGAMAL_H_
