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

#include <gtest/gtest.h>

#include <deque>

#include "deepocean/compare/session.h"
#include "deepocean/errors.h"
#include "deepocean/sigma.h"

namespace deepocean::compare {
namespace {

struct Identities {
  elgamal::KeyPair role1, role2;
  explicit Identities(Rng& rng)
      : role1(elgamal::KeyPair::generate(rng)), role2(elgamal::KeyPair::generate(rng)) {}
  const Scalar& sk(int role) const { return role == 1 ? role1.sk : role2.sk; }
};

CompareConfig make_config(const Identities& ids, int role, unsigned k, std::string sid = "sid") {
  CompareConfig c;
  c.bit_width = k;
  c.role = role;
  c.session_id = Bytes(sid.begin(), sid.end());
  c.identity_keys = {ids.role1.pk, ids.role2.pk};
  return c;
}

// Both parties plus a relay-style observer, wired through in-memory queues.
struct PairRun {
  std::optional<CompareSession> a, b;
  std::optional<PublicTranscript> observer;
  std::vector<Bytes> wire;  // every frame, in send order
  std::optional<Verdict> verdict_a, verdict_b;
};

PairRun run_pair(std::uint64_t s1, std::uint64_t s2, unsigned k, Rng& rng,
             const Identities& ids, const std::string& sid = "sid") {
  PairRun run;
  auto [a, ka] = CompareSession::start(make_config(ids, 1, k, sid), ids.role1.sk, s1, rng);
  auto [b, kb] = CompareSession::start(make_config(ids, 2, k, sid), ids.role2.sk, s2, rng);
  run.a.emplace(std::move(a));
  run.b.emplace(std::move(b));
  run.observer.emplace(make_config(ids, 1, k, sid));
  std::deque<std::pair<int, Bytes>> queue;  // (destination role, frame)
  queue.emplace_back(2, ka);
  queue.emplace_back(1, kb);
  while (!queue.empty()) {
    auto [dest, frame] = std::move(queue.front());
    queue.pop_front();
    run.wire.push_back(frame);
    run.observer->accept(frame);
    CompareSession& s = dest == 1 ? *run.a : *run.b;
    StepResult r = s.handle_message(frame, rng);
    if (r.verdict) (dest == 1 ? run.verdict_a : run.verdict_b) = r.verdict;
    for (auto& out : r.outbound) queue.emplace_back(dest == 1 ? 2 : 1, std::move(out));
  }
  return run;
}

Point gamma_point(WideInt g) { return Point::mul_base(Scalar::from_wide(g)); }

TEST(CompareSession, StartRejectsOutOfRangeSizes) {
  DeterministicRng rng(1);
  Identities ids(rng);
  EXPECT_THROW(
      {
        try {
          CompareSession::start(make_config(ids, 1, 4), ids.role1.sk, 16, rng);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::kInvalidOrderSize);
          throw;
        }
      },
      Error);
  EXPECT_THROW(CompareSession::start(make_config(ids, 1, 4), ids.role1.sk, 0, rng), Error);
  EXPECT_NO_THROW(CompareSession::start(make_config(ids, 1, 4), ids.role1.sk, 15, rng));
  EXPECT_NO_THROW(CompareSession::start(make_config(ids, 1, 64), ids.role1.sk, ~0ULL, rng));
}

TEST(CompareSession, SizeOneDecomposesLeastSignificantFirst) {
  DeterministicRng rng(2);
  Identities ids(rng);
  auto [s, keys] = CompareSession::start(make_config(ids, 1, 4), ids.role1.sk, 1, rng);
  EXPECT_EQ(s.own_bits(), (std::vector<std::uint8_t>{1, 0, 0, 0}));
  for (const auto& r : s.bit_randomness()) EXPECT_FALSE(r.is_zero());
}

TEST(CompareSession, WrongIdentityKeyForRole) {
  DeterministicRng rng(3);
  Identities ids(rng);
  EXPECT_THROW(CompareSession::start(make_config(ids, 1, 4), ids.role2.sk, 3, rng), Error);
}

// Joint decryption of every circuit element against gamma, for all size
// pairs below 2^k, k <= 4.
TEST(Circuit, DecryptsToGammaExhaustive) {
  DeterministicRng rng(4);
  const auto kp1 = elgamal::KeyPair::generate(rng);
  const auto kp2 = elgamal::KeyPair::generate(rng);
  const Point pk = kp1.pk + kp2.pk;
  const Scalar sk = kp1.sk + kp2.sk;
  for (unsigned k = 1; k <= 4; ++k) {
    const std::uint64_t n = std::uint64_t{1} << k;
    for (std::uint64_t s1 = 0; s1 < n; ++s1) {
      for (std::uint64_t s2 = 0; s2 < n; ++s2) {
        const auto b1 = to_bits(s1, k), b2 = to_bits(s2, k);
        std::vector<elgamal::Ciphertext> c1, c2;
        for (unsigned j = 0; j < k; ++j) {
          c1.push_back(elgamal::encrypt(Scalar::from_u64(b1[j]), Scalar::random_nonzero(rng), pk));
          c2.push_back(elgamal::encrypt(Scalar::from_u64(b2[j]), Scalar::random_nonzero(rng), pk));
        }
        for (bool offset : {false, true}) {
          const auto circuit = build_circuit(c1, c2, offset);
          for (unsigned j = 1; j <= k; ++j) {
            ASSERT_EQ(elgamal::decrypt_point(circuit[j - 1], sk),
                      gamma_point(gamma(j, b1, b2, k, offset)))
                << "k=" << k << " s1=" << s1 << " s2=" << s2 << " j=" << j;
          }
        }
      }
    }
  }
}

TEST(Circuit, SingleBitHasNoSumTerm) {
  DeterministicRng rng(5);
  const auto kp = elgamal::KeyPair::generate(rng);
  const auto a1 = elgamal::encrypt(Scalar::one(), Scalar::random_nonzero(rng), kp.pk);
  const auto a2 = elgamal::encrypt(Scalar::zero(), Scalar::random_nonzero(rng), kp.pk);
  const auto c = build_circuit(std::vector{a1}, std::vector{a2}, false);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].a, Point::generator() + a2.a - a1.a);
  EXPECT_EQ(c[0].b, a2.b - a1.b);
}

TEST(CompareSession, EndToEndExamples) {
  DeterministicRng rng(6);
  Identities ids(rng);
  struct Case {
    std::uint64_t s1, s2;
    Verdict expected;
  };
  for (const Case& c : {Case{5, 3, {2, true}}, Case{3, 5, {1, false}}, Case{4, 4, {1, false}}}) {
    PairRun run = run_pair(c.s1, c.s2, 4, rng, ids);
    ASSERT_TRUE(run.verdict_a && run.verdict_b) << c.s1 << " vs " << c.s2;
    EXPECT_EQ(*run.verdict_a, c.expected);
    EXPECT_EQ(*run.verdict_b, c.expected);
    EXPECT_EQ(run.observer->verdict(), c.expected);
    EXPECT_EQ(run.a->is_revealer(), c.expected.smaller_role == 1);
    EXPECT_EQ(run.b->is_revealer(), c.expected.smaller_role == 2);
  }
}

TEST(CompareSession, BothSidesBuildIdenticalCircuits) {
  DeterministicRng rng(7);
  Identities ids(rng);
  PairRun run = run_pair(9, 6, 4, rng, ids);
  const auto& ca = run.a->transcript().circuit();
  const auto& cb = run.b->transcript().circuit();
  ASSERT_EQ(ca.size(), cb.size());
  for (std::size_t j = 0; j < ca.size(); ++j) EXPECT_EQ(ca[j].to_bytes(), cb[j].to_bytes());
}

TEST(CompareSession, ZeroCountSurvivesShuffleAndBlinding) {
  DeterministicRng rng(8);
  Identities ids(rng);
  for (std::uint64_t s1 : {1u, 6u, 11u, 15u}) {
    for (std::uint64_t s2 : {1u, 7u, 10u, 15u}) {
      PairRun run = run_pair(s1, s2, 4, rng, ids);
      int zeros = 0;
      for (const auto& t : run.a->transcript().results()) zeros += t.is_identity();
      int expected = 0;
      for (unsigned j = 1; j <= 4; ++j) {
        expected += gamma(j, to_bits(s1, 4), to_bits(s2, 4), 4, false) == 0;
      }
      EXPECT_EQ(zeros, expected) << s1 << " vs " << s2;
    }
  }
}

TEST(CompareSession, RevealRoundTrip) {
  DeterministicRng rng(9);
  Identities ids(rng);
  PairRun run = run_pair(12, 5, 4, rng, ids);
  ASSERT_TRUE(run.b->is_revealer());
  EXPECT_THROW(
      {
        try {
          run.a->make_reveal();
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::kProtocolOrderViolation);
          throw;
        }
      },
      Error);
  const Reveal r = run.b->make_reveal();
  EXPECT_EQ(r.size, 5u);
  EXPECT_EQ(from_bits(run.b->own_bits()), r.size);
  const Point pk = run.a->transcript().combined_key();
  const auto& cts = run.a->transcript().bit_cts(2);
  EXPECT_TRUE(verify_reveal(r, cts, pk));
  EXPECT_FALSE(verify_reveal({r.size + 1, r.aggregate_randomness}, cts, pk));
  EXPECT_FALSE(verify_reveal({r.size, r.aggregate_randomness + Scalar::one()}, cts, pk));

  const Bytes frame = run.b->make_reveal_frame(rng);
  run.observer->accept(frame);
  const Reveal seen = run.a->accept_reveal(frame);
  EXPECT_EQ(seen.size, 5u);
  EXPECT_TRUE(run.observer->complete());
  EXPECT_EQ(run.observer->progress(), 16);
}

TEST(CompareSession, AggregateRandomnessExample) {
  const std::vector<Scalar> r{Scalar::from_u64(3), Scalar::from_u64(4)};
  EXPECT_EQ(aggregate_randomness(r), Scalar::from_u64(11));
}

TEST(CompareSession, FalseRevealRejected) {
  DeterministicRng rng(10);
  Identities ids(rng);
  PairRun run = run_pair(12, 5, 4, rng, ids);
  const Reveal honest = run.b->make_reveal();
  for (std::uint64_t size : {4u, 6u, 12u}) {
    const Bytes lie = encode_frame(run.b->config().session_id, Round::kReveal, 2,
                                   RevealBody{size, honest.aggregate_randomness}, ids.sk(2), rng);
    try {
      run.observer->check(lie);
      FAIL() << "accepted size " << size;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kBadReveal);
    }
  }
  // The larger party may not reveal at all.
  const Bytes from_larger = encode_frame(run.b->config().session_id, Round::kReveal, 1,
                                         RevealBody{12, Scalar::one()}, ids.sk(1), rng);
  EXPECT_THROW(run.observer->check(from_larger), Error);
}

// Replaces one bit ciphertext with a fresh encryption of the same bit, so the
// original proof now talks about a different ciphertext.
TEST(CompareSession, TamperedBitProofIsBadProofAtBitsRound) {
  DeterministicRng rng(11);
  Identities ids(rng);
  auto [a, ka] = CompareSession::start(make_config(ids, 1, 4), ids.role1.sk, 5, rng);
  auto [b, kb] = CompareSession::start(make_config(ids, 2, 4), ids.role2.sk, 3, rng);
  StepResult from_b = b.handle_message(ka, rng);
  ASSERT_EQ(from_b.outbound.size(), 1u);  // role 2's bits
  a.handle_message(kb, rng);

  Frame f = decode_frame(from_b.outbound[0]);
  auto body = std::get<BitsBody>(f.body);
  const Point pk = a.transcript().combined_key();
  body.cts[2] = elgamal::encrypt(Scalar::zero(), Scalar::random_nonzero(rng), pk);
  const Bytes forged = encode_frame(f.session_id, Round::kBits, 2, body, ids.sk(2), rng);
  try {
    a.handle_message(forged, rng);
    FAIL() << "forged bits accepted";
  } catch (const BadProofError& e) {
    EXPECT_EQ(e.round(), 7u);
    EXPECT_EQ(e.index(), 3u);
    EXPECT_EQ(e.evidence(), forged);
  }
  // State did not advance; the honest frame still goes through.
  EXPECT_NO_THROW(a.handle_message(from_b.outbound[0], rng));
}

TEST(CompareSession, ReplayFromAnotherSessionRejected) {
  DeterministicRng rng(12);
  Identities ids(rng);
  PairRun other = run_pair(7, 2, 4, rng, ids, "other-session");
  auto [a, ka] = CompareSession::start(make_config(ids, 1, 4), ids.role1.sk, 7, rng);
  // other.wire[1] is role 2's keys frame from the other session.
  try {
    a.handle_message(other.wire[1], rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocolOrderViolation);
  }
  // Rewrapping the body under this session id breaks the proof context.
  Frame f = decode_frame(other.wire[1]);
  const std::string sid = "sid";
  const Bytes rewrapped =
      encode_frame(Bytes(sid.begin(), sid.end()), Round::kKeys, 2, f.body, ids.sk(2), rng);
  EXPECT_THROW(a.handle_message(rewrapped, rng), BadProofError);
}

TEST(CompareSession, OutOfOrderAndStaleFrames) {
  DeterministicRng rng(13);
  Identities ids(rng);
  PairRun full = run_pair(7, 2, 4, rng, ids);
  auto [a, ka] = CompareSession::start(make_config(ids, 1, 4), ids.role1.sk, 7, rng);
  // Find role 2's bits and keys frames in the captured run.
  Bytes bits2, keys2;
  for (const auto& w : full.wire) {
    const Frame f = decode_frame(w);
    if (f.role == 2 && f.round == Round::kBits) bits2 = w;
    if (f.role == 2 && f.round == Round::kKeys) keys2 = w;
  }
  try {
    a.handle_message(bits2, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocolOrderViolation);
  }
  a.handle_message(keys2, rng);
  try {
    a.handle_message(keys2, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStaleRound);
  }
}

TEST(CompareSession, BadSignatureRejected) {
  DeterministicRng rng(14);
  Identities ids(rng);
  auto [a, ka] = CompareSession::start(make_config(ids, 1, 4), ids.role1.sk, 7, rng);
  auto [b, kb] = CompareSession::start(make_config(ids, 2, 4), ids.role2.sk, 2, rng);
  Frame f = decode_frame(kb);
  const Bytes resigned = encode_frame(f.session_id, f.round, 2, f.body, ids.sk(1), rng);
  try {
    a.handle_message(resigned, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBadSignature);
  }
}

TEST(CompareSession, ExpiresAfterTimeout) {
  DeterministicRng rng(15);
  Identities ids(rng);
  const auto t0 = Clock::now();
  auto cfg = make_config(ids, 1, 4);
  cfg.timeout = std::chrono::seconds(5);
  auto [a, ka] = CompareSession::start(cfg, ids.role1.sk, 7, rng, t0);
  auto [b, kb] = CompareSession::start(make_config(ids, 2, 4), ids.role2.sk, 2, rng, t0);
  EXPECT_FALSE(a.expired(t0 + std::chrono::seconds(5)));
  EXPECT_TRUE(a.expired(t0 + std::chrono::seconds(6)));
  try {
    a.handle_message(kb, rng, t0 + std::chrono::seconds(6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSessionExpired);
  }
}

TEST(Frame, DecodeRejectsTruncationAndTrailingBytes) {
  DeterministicRng rng(16);
  Identities ids(rng);
  auto [a, ka] = CompareSession::start(make_config(ids, 1, 4), ids.role1.sk, 7, rng);
  EXPECT_NO_THROW(decode_frame(ka));
  Bytes cut(ka.begin(), ka.end() - 1);
  EXPECT_THROW(decode_frame(cut), DecodeError);
  Frame f = decode_frame(ka);
  ByteWriter w;
  w.put_raw(f.signed_part).put_u8(0).put_raw(f.signature.to_bytes());
  EXPECT_THROW(decode_frame(std::move(w).bytes()), DecodeError);
}

TEST(CompareSession, OffsetWeightsReproduceFalseVerdict) {
  // 4 vs 7 at k = 3: the offset weights report role 1 as larger.
  DeterministicRng rng(17);
  Identities ids(rng);
  auto c1 = make_config(ids, 1, 3), c2 = make_config(ids, 2, 3);
  c1.offset_weights = c2.offset_weights = true;
  auto [a, ka] = CompareSession::start(c1, ids.role1.sk, 4, rng);
  auto [b, kb] = CompareSession::start(c2, ids.role2.sk, 7, rng);
  std::deque<std::pair<int, Bytes>> q{{2, ka}, {1, kb}};
  std::optional<Verdict> v;
  while (!q.empty()) {
    auto [dest, fr] = q.front();
    q.pop_front();
    auto r = (dest == 1 ? a : b).handle_message(fr, rng);
    if (r.verdict) v = r.verdict;
    for (auto& o : r.outbound) q.emplace_back(dest == 1 ? 2 : 1, o);
  }
  ASSERT_TRUE(v);
  EXPECT_EQ(v->smaller_role, 2);  // wrong: 4 < 7
}

}  // namespace
}  // namespace deepocean::compare
