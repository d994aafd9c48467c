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

#include "deepocean/group.h"

#include <sodium.h>

#include <algorithm>
#include <cstring>

#include "deepocean/errors.h"

namespace deepocean {

namespace {

// Group order q = 2^252 + 27742317777372353535851937790883648493, little-endian.
constexpr std::array<std::uint8_t, 32> kOrderLe = {
    0xed, 0xd3, 0xf5, 0x5c, 0x1a, 0x63, 0x12, 0x58, 0xd6, 0x9c, 0xf7,
    0xa2, 0xde, 0xf9, 0xde, 0x14, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x10};

void ensure_sodium() {
  static const bool ready = [] { return sodium_init() >= 0; }();
  if (!ready) throw Error(ErrorCode::kInvalidArgument, "libsodium init failed");
}

bool less_than_order(const std::array<std::uint8_t, 32>& le) {
  for (int i = 31; i >= 0; --i) {
    if (le[i] < kOrderLe[i]) return true;
    if (le[i] > kOrderLe[i]) return false;
  }
  return false;
}

void put_u64_be(crypto_hash_sha512_state& st, std::uint64_t v) {
  std::uint8_t buf[8];
  for (int i = 7; i >= 0; --i) {
    buf[i] = static_cast<std::uint8_t>(v);
    v >>= 8;
  }
  crypto_hash_sha512_update(&st, buf, sizeof buf);
}

}  // namespace

// ---------------------------------------------------------------------------
// Rng

void SystemRng::fill(std::span<std::uint8_t> out) {
  ensure_sodium();
  randombytes_buf(out.data(), out.size());
}

DeterministicRng::DeterministicRng(std::uint64_t seed) {
  ensure_sodium();
  std::uint8_t in[8];
  for (int i = 0; i < 8; ++i) in[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  crypto_generichash(key_.data(), key_.size(), in, sizeof in, nullptr, 0);
}

void DeterministicRng::fill(std::span<std::uint8_t> out) {
  std::uint8_t nonce[crypto_stream_chacha20_NONCEBYTES] = {};
  std::uint64_t c = counter_++;
  for (std::size_t i = 0; i < sizeof nonce; ++i) {
    nonce[i] = static_cast<std::uint8_t>(c >> (8 * i));
  }
  std::fill(out.begin(), out.end(), 0);
  crypto_stream_chacha20_xor(out.data(), out.data(), out.size(), nonce,
                             key_.data());
}

Rng& system_rng() {
  static SystemRng rng;
  return rng;
}

// ---------------------------------------------------------------------------
// Scalar

Scalar Scalar::from_u64(std::uint64_t v) {
  Scalar s;
  for (int i = 0; i < 8; ++i) s.le_[i] = static_cast<std::uint8_t>(v >> (8 * i));
  return s;
}

Scalar Scalar::from_i64(std::int64_t v) { return from_wide(v); }

Scalar Scalar::from_wide(WideInt v) {
  const bool negative = v < 0;
  unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-(v + 1)) + 1
                                   : static_cast<unsigned __int128>(v);
  Scalar s;
  for (int i = 0; i < 16; ++i) {
    s.le_[i] = static_cast<std::uint8_t>(mag >> (8 * i));
  }
  return negative ? -s : s;
}

Scalar Scalar::pow2(unsigned e) {
  if (e < 252) {
    Scalar s;
    s.le_[e / 8] = static_cast<std::uint8_t>(1u << (e % 8));
    return s;
  }
  Scalar s = pow2(251);
  for (unsigned i = 251; i < e; ++i) s = s + s;
  return s;
}

Scalar Scalar::random(Rng& rng) {
  std::array<std::uint8_t, 64> wide;
  rng.fill(wide);
  return from_wide_bytes(wide);
}

Scalar Scalar::random_nonzero(Rng& rng) {
  for (;;) {
    Scalar s = random(rng);
    if (!s.is_zero()) return s;
  }
}

Scalar Scalar::from_wide_bytes(std::span<const std::uint8_t, 64> bytes) {
  ensure_sodium();
  Scalar s;
  crypto_core_ristretto255_scalar_reduce(s.le_.data(), bytes.data());
  return s;
}

Scalar Scalar::from_bytes(ByteSpan bytes) {
  if (bytes.size() != kSize) {
    throw DecodeError("scalar: expected 32 bytes, got " +
                      std::to_string(bytes.size()));
  }
  Scalar s;
  std::reverse_copy(bytes.begin(), bytes.end(), s.le_.begin());
  if (!less_than_order(s.le_)) throw DecodeError("scalar: value >= group order");
  return s;
}

std::array<std::uint8_t, Scalar::kSize> Scalar::to_bytes() const {
  std::array<std::uint8_t, kSize> be;
  std::reverse_copy(le_.begin(), le_.end(), be.begin());
  return be;
}

bool Scalar::is_zero() const {
  return std::all_of(le_.begin(), le_.end(), [](std::uint8_t b) { return b == 0; });
}

Scalar Scalar::inverse() const {
  ensure_sodium();
  Scalar r;
  if (crypto_core_ristretto255_scalar_invert(r.le_.data(), le_.data()) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "inverse of zero scalar");
  }
  return r;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  Scalar r;
  crypto_core_ristretto255_scalar_add(r.le_.data(), a.le_.data(), b.le_.data());
  return r;
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  Scalar r;
  crypto_core_ristretto255_scalar_sub(r.le_.data(), a.le_.data(), b.le_.data());
  return r;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar r;
  crypto_core_ristretto255_scalar_mul(r.le_.data(), a.le_.data(), b.le_.data());
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r;
  crypto_core_ristretto255_scalar_negate(r.le_.data(), le_.data());
  return r;
}

// ---------------------------------------------------------------------------
// Point

const Point& Point::generator() {
  static const Point g = mul_base(Scalar::one());
  return g;
}

Point Point::hash_to_point(std::string_view domain, ByteSpan data) {
  ensure_sodium();
  crypto_hash_sha512_state st;
  crypto_hash_sha512_init(&st);
  put_u64_be(st, domain.size());
  crypto_hash_sha512_update(
      &st, reinterpret_cast<const unsigned char*>(domain.data()), domain.size());
  put_u64_be(st, data.size());
  crypto_hash_sha512_update(&st, data.data(), data.size());
  std::uint8_t digest[crypto_hash_sha512_BYTES];
  crypto_hash_sha512_final(&st, digest);
  Point p;
  crypto_core_ristretto255_from_hash(p.enc_.data(), digest);
  return p;
}

Point Point::random(Rng& rng) {
  std::array<std::uint8_t, 64> wide;
  rng.fill(wide);
  Point p;
  crypto_core_ristretto255_from_hash(p.enc_.data(), wide.data());
  return p;
}

Point Point::mul_base(const Scalar& s) {
  ensure_sodium();
  Point p;
  if (crypto_scalarmult_ristretto255_base(p.enc_.data(), s.le_bytes().data()) != 0) {
    p.enc_.fill(0);
  }
  return p;
}

Point Point::from_bytes(ByteSpan bytes) {
  ensure_sodium();
  if (bytes.size() != kSize) {
    throw DecodeError("point: expected 32 bytes, got " +
                      std::to_string(bytes.size()));
  }
  if (crypto_core_ristretto255_is_valid_point(bytes.data()) != 1) {
    throw DecodeError("point: not a canonical group element");
  }
  Point p;
  std::copy(bytes.begin(), bytes.end(), p.enc_.begin());
  return p;
}

bool Point::is_identity() const {
  return std::all_of(enc_.begin(), enc_.end(), [](std::uint8_t b) { return b == 0; });
}

Point operator+(const Point& a, const Point& b) {
  if (a.is_identity()) return b;
  if (b.is_identity()) return a;
  Point r;
  crypto_core_ristretto255_add(r.enc_.data(), a.enc_.data(), b.enc_.data());
  return r;
}

Point operator-(const Point& a, const Point& b) {
  if (b.is_identity()) return a;
  Point r;
  crypto_core_ristretto255_sub(r.enc_.data(), a.enc_.data(), b.enc_.data());
  return r;
}

Point Point::operator-() const { return Point() - *this; }

Point operator*(const Scalar& s, const Point& p) {
  if (p.is_identity() || s.is_zero()) return Point();
  if (p == Point::generator()) return Point::mul_base(s);
  Point r;
  if (crypto_scalarmult_ristretto255(r.enc_.data(), s.le_bytes().data(),
                                     p.enc_.data()) != 0) {
    r.enc_.fill(0);
  }
  return r;
}

Point multi_mul(std::span<const Scalar> scalars, std::span<const Point> points) {
  if (scalars.size() != points.size()) {
    throw Error(ErrorCode::kInvalidArgument, "multi_mul: length mismatch");
  }
  Point acc;
  for (std::size_t i = 0; i < scalars.size(); ++i) acc += scalars[i] * points[i];
  return acc;
}

// ---------------------------------------------------------------------------
// Hashing

Transcript& Transcript::append(const Point& p) {
  items_.emplace_back(p.to_bytes().begin(), p.to_bytes().end());
  return *this;
}

Transcript& Transcript::append(const Scalar& s) {
  auto b = s.to_bytes();
  items_.emplace_back(b.begin(), b.end());
  return *this;
}

Transcript& Transcript::append(ByteSpan bytes) {
  items_.emplace_back(bytes.begin(), bytes.end());
  return *this;
}

Transcript& Transcript::append(std::string_view text) {
  items_.emplace_back(text.begin(), text.end());
  return *this;
}

Transcript& Transcript::append_u64(std::uint64_t v) {
  Bytes b(8);
  for (int i = 7; i >= 0; --i) {
    b[i] = static_cast<std::uint8_t>(v);
    v >>= 8;
  }
  items_.push_back(std::move(b));
  return *this;
}

Scalar hash_to_scalar(std::string_view domain_tag, std::span<const Bytes> items) {
  if (domain_tag.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "hash_to_scalar: empty domain tag");
  }
  ensure_sodium();
  crypto_hash_sha512_state st;
  crypto_hash_sha512_init(&st);
  put_u64_be(st, domain_tag.size());
  crypto_hash_sha512_update(
      &st, reinterpret_cast<const unsigned char*>(domain_tag.data()),
      domain_tag.size());
  put_u64_be(st, items.size());
  for (const Bytes& item : items) {
    put_u64_be(st, item.size());
    crypto_hash_sha512_update(&st, item.data(), item.size());
  }
  std::array<std::uint8_t, 64> digest;
  crypto_hash_sha512_final(&st, digest.data());
  return Scalar::from_wide_bytes(digest);
}

// ---------------------------------------------------------------------------
// Pedersen

const GeneratorSet& GeneratorSet::standard() {
  static const GeneratorSet gens{
      Point::generator(),
      Point::hash_to_point("deepocean/v1/pedersen-h"),
  };
  return gens;
}

PedersenCommitment pedersen_commit(const Scalar& x, const Scalar& r,
                                   const GeneratorSet& gens) {
  if (r.is_zero()) {
    throw Error(ErrorCode::kInvalidArgument, "pedersen_commit: r must be nonzero");
  }
  return {x * gens.g + r * gens.h};
}

bool pedersen_verify(const PedersenCommitment& c, const Scalar& x,
                     const Scalar& r, const GeneratorSet& gens) {
  return c.c == x * gens.g + r * gens.h;
}

// ---------------------------------------------------------------------------
// Encoding helpers

std::string to_hex(ByteSpan bytes) {
  ensure_sodium();
  std::string out(bytes.size() * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), bytes.data(), bytes.size());
  out.pop_back();
  return out;
}

Bytes from_hex(std::string_view hex) {
  ensure_sodium();
  if (hex.size() % 2 != 0) throw DecodeError("hex: odd length");
  Bytes out(hex.size() / 2);
  std::size_t written = 0;
  const char* end = nullptr;
  if (sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr,
                     &written, &end) != 0 ||
      written != out.size() || end != hex.data() + hex.size()) {
    throw DecodeError("hex: invalid characters");
  }
  return out;
}

ByteWriter& ByteWriter::put(const Point& p) { return put_raw(p.to_bytes()); }

ByteWriter& ByteWriter::put(const Scalar& s) { return put_raw(s.to_bytes()); }

ByteWriter& ByteWriter::put_u8(std::uint8_t v) {
  out_.push_back(v);
  return *this;
}

ByteWriter& ByteWriter::put_u16(std::uint16_t v) {
  out_.push_back(static_cast<std::uint8_t>(v >> 8));
  out_.push_back(static_cast<std::uint8_t>(v));
  return *this;
}

ByteWriter& ByteWriter::put_u32(std::uint32_t v) {
  for (int i = 3; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  return *this;
}

ByteWriter& ByteWriter::put_u64(std::uint64_t v) {
  for (int i = 7; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  return *this;
}

ByteWriter& ByteWriter::put_raw(ByteSpan bytes) {
  out_.insert(out_.end(), bytes.begin(), bytes.end());
  return *this;
}

ByteWriter& ByteWriter::put_blob(ByteSpan bytes) {
  put_u32(static_cast<std::uint32_t>(bytes.size()));
  return put_raw(bytes);
}

ByteSpan ByteReader::raw(std::size_t n) {
  if (remaining() < n) throw DecodeError("record truncated");
  ByteSpan out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

Point ByteReader::point() { return Point::from_bytes(raw(Point::kSize)); }

Scalar ByteReader::scalar() { return Scalar::from_bytes(raw(Scalar::kSize)); }

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint16_t ByteReader::u16() {
  ByteSpan b = raw(2);
  return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
}

std::uint32_t ByteReader::u32() {
  ByteSpan b = raw(4);
  std::uint32_t v = 0;
  for (std::uint8_t x : b) v = (v << 8) | x;
  return v;
}

std::uint64_t ByteReader::u64() {
  ByteSpan b = raw(8);
  std::uint64_t v = 0;
  for (std::uint8_t x : b) v = (v << 8) | x;
  return v;
}

ByteSpan ByteReader::blob() { return raw(u32()); }

void ByteReader::expect_end() const {
  if (remaining() != 0) throw DecodeError("trailing bytes in record");
}

}  // namespace deepocean
