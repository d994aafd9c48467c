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

#include <gtest/gtest.h>

#include "deepocean/errors.h"

namespace deepocean {
namespace {

// Scalar multiplication by repeated addition; independent of libsodium's
// scalarmult.
Point repeated_add(std::uint64_t k, const Point& p) {
  Point acc;
  for (std::uint64_t i = 0; i < k; ++i) acc = acc + p;
  return acc;
}

TEST(HashToScalar, Deterministic) {
  const Point p = Point::hash_to_point("test/p");
  Transcript t;
  t.append(p);
  EXPECT_EQ(hash_to_scalar("tag", t), hash_to_scalar("tag", t));
}

TEST(HashToScalar, ItemCountIsBound) {
  const Point p = Point::hash_to_point("test/p");
  const Point q = Point::hash_to_point("test/q");
  Transcript one, two;
  one.append(p);
  two.append(p).append(q);
  EXPECT_NE(hash_to_scalar("tag", one), hash_to_scalar("tag", two));
}

TEST(HashToScalar, DomainSeparation) {
  Transcript t;
  t.append(Point::generator());
  EXPECT_NE(hash_to_scalar("tag1", t), hash_to_scalar("tag2", t));
}

TEST(HashToScalar, ConcatenationAmbiguityIsPrevented) {
  const Bytes ab = {0x01, 0x02};
  const Bytes a = {0x01};
  const Bytes b = {0x02};
  Transcript joined, split;
  joined.append(ByteSpan(ab)).append(ByteSpan(Bytes{}));
  split.append(ByteSpan(a)).append(ByteSpan(b));
  EXPECT_NE(hash_to_scalar("tag", joined), hash_to_scalar("tag", split));
}

TEST(HashToScalar, RejectsEmptyTag) {
  EXPECT_THROW(hash_to_scalar("", Transcript{}), Error);
}

TEST(Pedersen, ZeroValueCommitsToH) {
  const auto& gens = GeneratorSet::standard();
  EXPECT_EQ(pedersen_commit(Scalar::zero(), Scalar::one(), gens).c, gens.h);
}

TEST(Pedersen, UnitValueCommitsToGPlusH) {
  const auto& gens = GeneratorSet::standard();
  EXPECT_EQ(pedersen_commit(Scalar::one(), Scalar::one(), gens).c, gens.g + gens.h);
}

TEST(Pedersen, MatchesRepeatedAdditionOracle) {
  const auto& gens = GeneratorSet::standard();
  const Point expected = repeated_add(3, gens.g) + repeated_add(5, gens.h);
  EXPECT_EQ(pedersen_commit(Scalar::from_u64(3), Scalar::from_u64(5), gens).c,
            expected);
}

TEST(Pedersen, RejectsZeroBlinding) {
  try {
    pedersen_commit(Scalar::one(), Scalar::zero(), GeneratorSet::standard());
    FAIL() << "expected throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(Pedersen, VerifyRoundtripAndBinding) {
  DeterministicRng rng(7);
  const auto& gens = GeneratorSet::standard();
  const Scalar x = Scalar::random(rng);
  const Scalar r = Scalar::random_nonzero(rng);
  const auto c = pedersen_commit(x, r, gens);
  EXPECT_TRUE(pedersen_verify(c, x, r, gens));
  EXPECT_FALSE(pedersen_verify(c, x + Scalar::one(), r, gens));
  EXPECT_FALSE(pedersen_verify(c, x, r + Scalar::one(), gens));
}

TEST(Pedersen, Homomorphic) {
  DeterministicRng rng(8);
  const auto& gens = GeneratorSet::standard();
  for (int i = 0; i < 20; ++i) {
    const Scalar x1 = Scalar::random(rng), x2 = Scalar::random(rng);
    const Scalar r1 = Scalar::random_nonzero(rng), r2 = Scalar::random_nonzero(rng);
    if ((r1 + r2).is_zero()) continue;
    EXPECT_EQ(pedersen_commit(x1, r1, gens).c + pedersen_commit(x2, r2, gens).c,
              pedersen_commit(x1 + x2, r1 + r2, gens).c);
  }
}

TEST(Generators, AreDistinctAndNonIdentity) {
  const auto& gens = GeneratorSet::standard();
  EXPECT_FALSE(gens.g.is_identity());
  EXPECT_FALSE(gens.h.is_identity());
  EXPECT_NE(gens.g, gens.h);
  EXPECT_EQ(gens.h, Point::hash_to_point("deepocean/v1/pedersen-h"));
}

TEST(GroupLaws, NeutralElement) {
  DeterministicRng rng(1);
  for (int i = 0; i < 50; ++i) {
    const Point p = Point::random(rng);
    EXPECT_EQ(p + Point::identity(), p);
    EXPECT_EQ(Point::identity() + p, p);
    EXPECT_TRUE((p - p).is_identity());
    EXPECT_EQ(p + (-p), Point::identity());
  }
}

TEST(GroupLaws, ScalarDistributivityAndAssociativity) {
  DeterministicRng rng(2);
  for (int i = 0; i < 50; ++i) {
    const Point p = Point::random(rng);
    const Scalar a = Scalar::random(rng), b = Scalar::random(rng);
    EXPECT_EQ((a + b) * p, a * p + b * p);
    EXPECT_EQ(a * (b * p), (a * b) * p);
  }
}

TEST(GroupLaws, BaseMultMatchesGenericMult) {
  DeterministicRng rng(3);
  for (int i = 0; i < 10; ++i) {
    const Scalar a = Scalar::random(rng);
    EXPECT_EQ(Point::mul_base(a), a * Point::generator());
  }
  EXPECT_EQ(Point::mul_base(Scalar::from_u64(2)),
            Point::generator() + Point::generator());
  EXPECT_TRUE(Point::mul_base(Scalar::zero()).is_identity());
}

TEST(ScalarArithmetic, SmallIntegers) {
  EXPECT_EQ(Scalar::from_u64(2) + Scalar::from_u64(3), Scalar::from_u64(5));
  EXPECT_EQ(Scalar::from_i64(-1) + Scalar::one(), Scalar::zero());
  EXPECT_EQ(Scalar::from_i64(-6), -Scalar::from_u64(6));
  EXPECT_EQ(Scalar::pow2(10), Scalar::from_u64(1024));
  EXPECT_EQ(Scalar::pow2(64), Scalar::from_wide(WideInt(1) << 64));
  EXPECT_EQ(Scalar::pow2(260), Scalar::pow2(130) * Scalar::pow2(130));
  EXPECT_EQ(Scalar::from_u64(7) * Scalar::from_u64(7).inverse(), Scalar::one());
}

TEST(Serialization, GeneratorRoundtrip) {
  const auto bytes = Point::generator().to_bytes();
  EXPECT_EQ(bytes.size(), Point::kSize);
  EXPECT_EQ(Point::from_bytes(bytes), Point::generator());
}

TEST(Serialization, IdentityIsAllZero) {
  const auto bytes = Point::identity().to_bytes();
  for (auto b : bytes) EXPECT_EQ(b, 0);
  EXPECT_TRUE(Point::from_bytes(bytes).is_identity());
}

TEST(Serialization, WrongLengthRejected) {
  const Bytes zeros(31, 0);
  EXPECT_THROW(Point::from_bytes(zeros), DecodeError);
  EXPECT_THROW(Scalar::from_bytes(zeros), DecodeError);
  EXPECT_THROW(Point::from_bytes(Bytes(33, 0)), DecodeError);
  EXPECT_THROW(Point::from_bytes(Bytes{}), DecodeError);
}

TEST(Serialization, NonCanonicalPointRejected) {
  // Field element 2^255 - 1 is not reduced.
  Bytes bad(32, 0xff);
  bad[31] = 0x7f;
  EXPECT_THROW(Point::from_bytes(bad), DecodeError);
  // Negative field element (low bit set) is never a canonical encoding.
  Bytes odd(32, 0);
  odd[0] = 1;
  EXPECT_THROW(Point::from_bytes(odd), DecodeError);
}

TEST(Serialization, ScalarEqualToOrderRejected) {
  // q in big-endian.
  const Bytes q = from_hex(
      "1000000000000000000000000000000014def9dea2f79cd65812631a5cf5d3ed");
  EXPECT_THROW(Scalar::from_bytes(q), DecodeError);
  Bytes q_minus_one = q;
  q_minus_one.back() -= 1;
  EXPECT_EQ(Scalar::from_bytes(q_minus_one), -Scalar::one());
}

TEST(Serialization, RoundtripIsIdentityOnRandomValues) {
  DeterministicRng rng(4);
  for (int i = 0; i < 100; ++i) {
    const Scalar s = Scalar::random(rng);
    const Point p = Point::random(rng);
    EXPECT_EQ(Scalar::from_bytes(s.to_bytes()), s);
    EXPECT_EQ(Point::from_bytes(p.to_bytes()), p);
  }
}

TEST(Hex, RoundtripAndErrors) {
  const Bytes b = {0x00, 0xab, 0xff};
  EXPECT_EQ(to_hex(b), "00abff");
  EXPECT_EQ(from_hex("00abff"), b);
  EXPECT_THROW(from_hex("0"), DecodeError);
  EXPECT_THROW(from_hex("zz"), DecodeError);
}

TEST(ByteRecords, ReaderDetectsTruncationAndTrailingBytes) {
  Bytes rec = ByteWriter().put_u32(7).put(Point::generator()).bytes();
  ByteReader r(rec);
  EXPECT_EQ(r.u32(), 7u);
  EXPECT_EQ(r.point(), Point::generator());
  r.expect_end();
  rec.push_back(0);
  ByteReader r2(rec);
  r2.u32();
  r2.point();
  EXPECT_THROW(r2.expect_end(), DecodeError);
  ByteReader r3(ByteSpan(rec).first(10));
  r3.u32();
  EXPECT_THROW(r3.point(), DecodeError);
}

}  // namespace
}  // namespace deepocean
