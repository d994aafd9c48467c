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

#include "deepocean/compare/transcript.h"

#include <algorithm>

#include "deepocean/errors.h"
#include "deepocean/shuffle.h"

namespace deepocean::compare {

namespace {

constexpr std::array<Round, 5> kSequence1 = {Round::kKeys, Round::kBits, Round::kShuffle1,
                                             Round::kBlind, Round::kShares};
constexpr std::array<Round, 5> kSequence2 = {Round::kKeys, Round::kBits, Round::kShuffle2,
                                             Round::kBlind, Round::kShares};

const std::array<Round, 5>& sequence(int role) { return role == 1 ? kSequence1 : kSequence2; }

[[noreturn]] void violation(const std::string& what) {
  throw Error(ErrorCode::kProtocolOrderViolation, what);
}

[[noreturn]] void bad_proof(const Frame& f, std::uint32_t index, ByteSpan raw,
                            const std::string& what) {
  throw BadProofError(static_cast<std::uint32_t>(f.round), index, Bytes(raw.begin(), raw.end()),
                      "role " + std::to_string(f.role) + " " + std::string(round_name(f.round)) +
                          ": " + what);
}

}  // namespace

PublicTranscript::PublicTranscript(CompareConfig config) : config_(std::move(config)) {
  config_.role = 1;
  config_.validate();
}

Point PublicTranscript::combined_key() const {
  if (!has_combined_key()) violation("combined key not yet known");
  return *keys_[0] + *keys_[1];
}

bool PublicTranscript::sent(int role, Round round) const {
  return sent_.at(role - 1)[static_cast<std::size_t>(round)];
}

std::optional<Round> PublicTranscript::next_round(int role) const {
  for (Round r : sequence(role)) {
    if (!sent(role, r)) return r;
  }
  if (verdict_ && verdict_->smaller_role == role && !reveal_) return Round::kReveal;
  return std::nullopt;
}

std::vector<int> PublicTranscript::roles_owing() const {
  std::vector<int> out;
  for (int role : {1, 2}) {
    const auto next = next_round(role);
    if (!next) continue;
    bool ready = false;
    switch (*next) {
      case Round::kKeys: ready = true; break;
      case Round::kBits: ready = has_combined_key(); break;
      case Round::kShuffle1: ready = !circuit_.empty(); break;
      case Round::kShuffle2: ready = sent(1, Round::kShuffle1); break;
      case Round::kBlind: ready = sent(2, Round::kShuffle2); break;
      case Round::kShares: ready = sent(1, Round::kBlind) && sent(2, Round::kBlind); break;
      case Round::kReveal: ready = true; break;
    }
    if (ready) out.push_back(role);
  }
  return out;
}

int PublicTranscript::progress() const {
  if (reveal_) return 16;
  if (verdict_) return 14;
  int step = 0;
  for (Round r : {Round::kKeys, Round::kBits}) {
    if (sent(1, r) && sent(2, r)) step = static_cast<int>(r);
  }
  if (sent(1, Round::kShuffle1)) step = 9;
  if (sent(2, Round::kShuffle2)) step = 10;
  for (Round r : {Round::kBlind, Round::kShares}) {
    if (sent(1, r) && sent(2, r)) step = static_cast<int>(r);
  }
  return step;
}

sigma::ProofContext PublicTranscript::context(const Frame& frame, std::uint32_t index) const {
  return {config_.session_id, static_cast<std::uint32_t>(frame.round), index,
          config_.identity_of(frame.role)};
}

void PublicTranscript::check_order(const Frame& f) const {
  if (f.session_id != config_.session_id) violation("frame belongs to another session");
  const int role = f.role;
  if (f.round == Round::kShuffle1 && role != 1) violation("role 2 sent the first shuffle");
  if (f.round == Round::kShuffle2 && role != 2) violation("role 1 sent the second shuffle");
  if (sent(role, f.round)) {
    throw Error(ErrorCode::kStaleRound, "role " + std::to_string(role) + " already sent " +
                                            std::string(round_name(f.round)));
  }
  // Everything earlier in the role's own sequence must be done.
  if (f.round != Round::kReveal) {
    for (Round r : sequence(role)) {
      if (r == f.round) break;
      if (!sent(role, r)) violation(std::string(round_name(f.round)) + " before " +
                                    std::string(round_name(r)));
    }
  }
  switch (f.round) {
    case Round::kKeys: break;
    case Round::kBits:
      if (!has_combined_key()) violation("bits before both keys");
      break;
    case Round::kShuffle1:
      if (circuit_.empty()) violation("shuffle before both bit vectors");
      break;
    case Round::kShuffle2:
      if (!sent(1, Round::kShuffle1)) violation("second shuffle before the first");
      break;
    case Round::kBlind:
      if (!sent(2, Round::kShuffle2)) violation("blind before both shuffles");
      break;
    case Round::kShares:
      if (!sent(1, Round::kBlind) || !sent(2, Round::kBlind)) {
        violation("shares before both blinds");
      }
      break;
    case Round::kReveal:
      if (!verdict_) violation("reveal before verdict");
      if (verdict_->smaller_role != role) violation("reveal from the larger party");
      break;
  }
}

void PublicTranscript::check_body(const Frame& f, ByteSpan raw) const {
  const unsigned k = config_.bit_width;
  const int role = f.role;
  auto expect_len = [&](std::size_t n) {
    if (n != k) bad_proof(f, 0, raw, "expected " + std::to_string(k) + " elements");
  };

  if (const auto* b = std::get_if<KeysBody>(&f.body)) {
    if (b->session_key.is_identity()) bad_proof(f, 0, raw, "identity session key");
    if (!sigma::verify_dlog(b->proof, Point::generator(), b->session_key, context(f, 0))) {
      bad_proof(f, 0, raw, "dlog proof rejected");
    }
  } else if (const auto* b = std::get_if<BitsBody>(&f.body)) {
    expect_len(b->cts.size());
    const Point pk = combined_key();
    for (unsigned j = 1; j <= k; ++j) {
      if (!sigma::verify_bit(b->proofs[j - 1], b->cts[j - 1], pk, context(f, j))) {
        bad_proof(f, j, raw, "bit proof rejected");
      }
    }
  } else if (const auto* b = std::get_if<ShuffleBody>(&f.body)) {
    expect_len(b->outputs.size());
    shuffle::ShuffleInstance inst;
    inst.inputs = f.round == Round::kShuffle1 ? circuit_ : shuffled_[0];
    inst.outputs = b->outputs;
    inst.pk = combined_key();
    if (!shuffle::verify_shuffle(inst, b->proof, context(f, 0))) {
      bad_proof(f, 0, raw, "shuffle proof rejected");
    }
  } else if (const auto* b = std::get_if<BlindBody>(&f.body)) {
    expect_len(b->blinded.size());
    const auto& in = shuffled_[1];
    for (unsigned j = 1; j <= k; ++j) {
      const auto& ct = b->blinded[j - 1];
      // A zero blinding factor would erase the element.
      if (ct.a.is_identity() || ct.b.is_identity()) bad_proof(f, j, raw, "blinded to identity");
      const std::array<Point, 2> bases{in[j - 1].a, in[j - 1].b};
      const std::array<Point, 2> points{ct.a, ct.b};
      if (!sigma::verify_eq_logs(b->proofs[j - 1], bases, points, context(f, j))) {
        bad_proof(f, j, raw, "blinding proof rejected");
      }
    }
  } else if (const auto* b = std::get_if<SharesBody>(&f.body)) {
    expect_len(b->shares.size());
    const Point& own_key = *keys_[role - 1];
    for (unsigned j = 1; j <= k; ++j) {
      const std::array<Point, 2> bases{Point::generator(),
                                       blinded_[0][j - 1].b + blinded_[1][j - 1].b};
      const std::array<Point, 2> points{own_key, b->shares[j - 1]};
      if (!sigma::verify_eq_logs(b->proofs[j - 1], bases, points, context(f, j))) {
        bad_proof(f, j, raw, "decryption share proof rejected");
      }
    }
  } else if (const auto* b = std::get_if<RevealBody>(&f.body)) {
    if (!size_in_range(b->size, k)) {
      throw Error(ErrorCode::kBadReveal, "revealed size out of range");
    }
    if (!verify_reveal({b->size, b->aggregate_randomness}, bits_[role - 1], combined_key())) {
      throw Error(ErrorCode::kBadReveal, "reveal does not match the bit ciphertexts");
    }
  }
}

Frame PublicTranscript::verify(ByteSpan raw) const {
  Frame f = decode_frame(raw);
  if (!verify_frame_signature(f, config_.identity_of(f.role))) {
    throw Error(ErrorCode::kBadSignature, "frame signature rejected");
  }
  check_order(f);
  check_body(f, raw);
  return f;
}

void PublicTranscript::check(ByteSpan raw) const { (void)verify(raw); }

const Frame& PublicTranscript::accept(ByteSpan raw) {
  last_ = verify(raw);
  record(last_);
  return last_;
}

void PublicTranscript::record(const Frame& f) {
  const int idx = f.role - 1;
  sent_[idx][static_cast<std::size_t>(f.round)] = true;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, KeysBody>) {
          keys_[idx] = b.session_key;
        } else if constexpr (std::is_same_v<T, BitsBody>) {
          bits_[idx] = b.cts;
          if (!bits_[0].empty() && !bits_[1].empty()) {
            circuit_ = build_circuit(bits_[0], bits_[1], config_.offset_weights);
          }
        } else if constexpr (std::is_same_v<T, ShuffleBody>) {
          shuffled_[f.round == Round::kShuffle1 ? 0 : 1] = b.outputs;
        } else if constexpr (std::is_same_v<T, BlindBody>) {
          blinded_[idx] = b.blinded;
        } else if constexpr (std::is_same_v<T, SharesBody>) {
          shares_[idx] = b.shares;
          if (!shares_[0].empty() && !shares_[1].empty()) {
            results_.resize(config_.bit_width);
            bool any_zero = false;
            for (std::size_t j = 0; j < results_.size(); ++j) {
              results_[j] = (blinded_[0][j].a + blinded_[1][j].a) - (shares_[0][j] + shares_[1][j]);
              any_zero = any_zero || results_[j].is_identity();
            }
            verdict_ = any_zero ? Verdict{2, true} : Verdict{1, false};
          }
        } else {
          reveal_ = Reveal{b.size, b.aggregate_randomness};
        }
      },
      f.body);
}

}  // namespace deepocean::compare
