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

#ifndef DEEPOCEAN_GROUP_H_
#define DEEPOCEAN_GROUP_H_

// Prime-order group (ristretto255) and its scalar field.
//
// Points are held in canonical 32-byte encoding; scalars are held reduced
// mod q. Both are plain values: cheap to copy, immutable through the public
// interface, safe to share between threads.

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deepocean/rng.h"

namespace deepocean {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

// Identifies the group and encodings used on the wire.
inline constexpr std::string_view kProtocolVersion = "deepocean/ristretto255/v1";

// Wide signed integer for plaintext arithmetic that can exceed 64 bits.
using WideInt = __int128;

class Scalar {
 public:
  static constexpr std::size_t kSize = 32;

  Scalar() = default;  // zero

  static Scalar zero() { return Scalar(); }
  static Scalar one() { return from_u64(1); }
  static Scalar from_u64(std::uint64_t v);
  static Scalar from_i64(std::int64_t v);
  static Scalar from_wide(WideInt v);
  // 2^e mod q.
  static Scalar pow2(unsigned e);

  static Scalar random(Rng& rng);
  // Uniform in [1, q).
  static Scalar random_nonzero(Rng& rng);
  // Reduces 64 uniformly random little-endian bytes mod q.
  static Scalar from_wide_bytes(std::span<const std::uint8_t, 64> bytes);

  // Fixed-length big-endian. Throws DecodeError on wrong length or value >= q.
  static Scalar from_bytes(ByteSpan bytes);
  std::array<std::uint8_t, kSize> to_bytes() const;

  bool is_zero() const;
  Scalar inverse() const;  // requires non-zero

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  friend bool operator==(const Scalar&, const Scalar&) = default;

  // Little-endian representation as used by libsodium.
  const std::array<std::uint8_t, kSize>& le_bytes() const { return le_; }

 private:
  std::array<std::uint8_t, kSize> le_{};
};

class Point {
 public:
  static constexpr std::size_t kSize = 32;

  Point() = default;  // identity O

  static Point identity() { return Point(); }
  static const Point& generator();
  // Nothing-up-my-sleeve point: SHA-512(domain || data) mapped to the group.
  static Point hash_to_point(std::string_view domain, ByteSpan data = {});
  static Point random(Rng& rng);
  // s * G using the fixed-base routine.
  static Point mul_base(const Scalar& s);

  // Throws DecodeError on wrong length or non-canonical / off-group bytes.
  static Point from_bytes(ByteSpan bytes);
  const std::array<std::uint8_t, kSize>& to_bytes() const { return enc_; }

  bool is_identity() const;

  friend Point operator+(const Point& a, const Point& b);
  friend Point operator-(const Point& a, const Point& b);
  friend Point operator*(const Scalar& s, const Point& p);
  Point operator-() const;
  Point& operator+=(const Point& o) { return *this = *this + o; }
  Point& operator-=(const Point& o) { return *this = *this - o; }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;

 private:
  std::array<std::uint8_t, kSize> enc_{};
};

// Sum of s_i * P_i.
Point multi_mul(std::span<const Scalar> scalars, std::span<const Point> points);

// Length-prefixed transcript of canonical encodings. The item count is bound
// into the final hash, so [P] and [P, Q] never collide.
class Transcript {
 public:
  Transcript& append(const Point& p);
  Transcript& append(const Scalar& s);
  Transcript& append(ByteSpan bytes);
  Transcript& append(std::string_view text);
  Transcript& append_u64(std::uint64_t v);

  std::size_t size() const { return items_.size(); }
  const std::vector<Bytes>& items() const { return items_; }

 private:
  std::vector<Bytes> items_;
};

// SHA-512 over (tag, items) reduced mod q. domain_tag must be non-empty.
Scalar hash_to_scalar(std::string_view domain_tag, std::span<const Bytes> items);
inline Scalar hash_to_scalar(std::string_view domain_tag, const Transcript& t) {
  return hash_to_scalar(domain_tag, t.items());
}

struct GeneratorSet {
  Point g;
  Point h;

  // g = ristretto255 base point, h = hash_to_point of a fixed domain string.
  static const GeneratorSet& standard();
};

struct PedersenCommitment {
  Point c;
  friend bool operator==(const PedersenCommitment&,
                         const PedersenCommitment&) = default;
};

// x*g + r*h. Throws Error(kInvalidArgument) when r is zero.
PedersenCommitment pedersen_commit(const Scalar& x, const Scalar& r,
                                   const GeneratorSet& gens);
bool pedersen_verify(const PedersenCommitment& c, const Scalar& x,
                     const Scalar& r, const GeneratorSet& gens);

std::string to_hex(ByteSpan bytes);
// Throws DecodeError on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

// Byte writer/reader for the fixed-order binary records used on the wire.
class ByteWriter {
 public:
  ByteWriter& put(const Point& p);
  ByteWriter& put(const Scalar& s);
  ByteWriter& put_u8(std::uint8_t v);
  ByteWriter& put_u16(std::uint16_t v);
  ByteWriter& put_u32(std::uint32_t v);
  ByteWriter& put_u64(std::uint64_t v);
  ByteWriter& put_raw(ByteSpan bytes);
  // u32 length prefix followed by bytes.
  ByteWriter& put_blob(ByteSpan bytes);

  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }

 private:
  Bytes out_;
};

class ByteReader {
 public:
  explicit ByteReader(ByteSpan in) : in_(in) {}

  Point point();
  Scalar scalar();
  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  ByteSpan raw(std::size_t n);
  ByteSpan blob();

  std::size_t remaining() const { return in_.size() - pos_; }
  std::size_t position() const { return pos_; }
  // Throws DecodeError if unread bytes remain.
  void expect_end() const;

 private:
  ByteSpan in_;
  std::size_t pos_ = 0;
};

}  // namespace deepocean

#endif  // DEEPOCEAN_GROUP_H_
