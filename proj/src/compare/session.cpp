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

#include "deepocean/compare/session.h"

#include <algorithm>

#include "deepocean/errors.h"
#include "deepocean/shuffle.h"
#include "deepocean/sigma.h"

namespace deepocean::compare {

CompareSession::CompareSession(CompareConfig config, const Scalar& identity_sk,
                               std::uint64_t size, Rng& rng, Clock::time_point now)
    : config_(std::move(config)),
      identity_sk_(identity_sk),
      size_(size),
      bits_(to_bits(size, config_.bit_width)),
      session_keys_(elgamal::KeyPair::generate(rng)),
      transcript_(config_),
      last_activity_(now) {
  bit_randomness_.reserve(config_.bit_width);
  blinding_.reserve(config_.bit_width);
  for (unsigned j = 0; j < config_.bit_width; ++j) {
    bit_randomness_.push_back(Scalar::random_nonzero(rng));
    blinding_.push_back(Scalar::random_nonzero(rng));
  }
}

std::pair<CompareSession, Bytes> CompareSession::start(CompareConfig config,
                                                       const Scalar& identity_sk,
                                                       std::uint64_t own_size, Rng& rng,
                                                       Clock::time_point now) {
  config.validate();
  if (!size_in_range(own_size, config.bit_width)) {
    throw Error(ErrorCode::kInvalidOrderSize,
                "order size must be in [1, 2^" + std::to_string(config.bit_width) + ")");
  }
  if (Point::mul_base(identity_sk) != config.identity_of(config.role)) {
    throw Error(ErrorCode::kInvalidArgument, "identity key does not match the assigned role");
  }
  CompareSession s(std::move(config), identity_sk, own_size, rng, now);
  Bytes keys = s.make_frame(Round::kKeys, rng);
  return {std::move(s), std::move(keys)};
}

sigma::ProofContext CompareSession::context(Round round, std::uint32_t index) const {
  return {config_.session_id, static_cast<std::uint32_t>(round), index,
          config_.identity_of(config_.role)};
}

Bytes CompareSession::emit(Round round, const FrameBody& body, Rng& rng) {
  Bytes raw = encode_frame(config_.session_id, round, config_.role, body, identity_sk_, rng);
  transcript_.accept(raw);
  return raw;
}

Bytes CompareSession::make_frame(Round round, Rng& rng) {
  const unsigned k = config_.bit_width;
  switch (round) {
    case Round::kKeys: {
      KeysBody b;
      b.session_key = session_keys_.pk;
      b.proof = sigma::prove_dlog(session_keys_.sk, Point::generator(), session_keys_.pk,
                                  context(round, 0), rng);
      return emit(round, b, rng);
    }
    case Round::kBits: {
      const Point pk = transcript_.combined_key();
      BitsBody b;
      for (unsigned j = 1; j <= k; ++j) {
        const auto ct = elgamal::encrypt(Scalar::from_u64(bits_[j - 1]),
                                         bit_randomness_[j - 1], pk);
        b.cts.push_back(ct);
        b.proofs.push_back(
            sigma::prove_bit(bits_[j - 1], bit_randomness_[j - 1], ct, pk, context(round, j), rng));
      }
      return emit(round, b, rng);
    }
    case Round::kShuffle1:
    case Round::kShuffle2: {
      shuffle::ShuffleInstance inst;
      inst.inputs = round == Round::kShuffle1 ? transcript_.circuit()
                                              : transcript_.shuffle_outputs(1);
      inst.pk = transcript_.combined_key();
      auto result = shuffle::shuffle(inst.inputs, inst.pk, rng);
      inst.outputs = result.outputs;
      ShuffleBody b;
      b.proof = shuffle::prove_shuffle(inst, result.witness, context(round, 0), rng);
      b.outputs = std::move(result.outputs);
      return emit(round, b, rng);
    }
    case Round::kBlind: {
      const auto& in = transcript_.shuffle_outputs(2);
      BlindBody b;
      for (unsigned j = 1; j <= k; ++j) {
        const Scalar& m = blinding_[j - 1];
        const auto ct = m * in[j - 1];
        const std::array<Point, 2> bases{in[j - 1].a, in[j - 1].b};
        const std::array<Point, 2> points{ct.a, ct.b};
        b.blinded.push_back(ct);
        b.proofs.push_back(sigma::prove_eq_logs(m, bases, points, context(round, j), rng));
      }
      return emit(round, b, rng);
    }
    case Round::kShares: {
      SharesBody b;
      for (unsigned j = 1; j <= k; ++j) {
        const Point u_sum = transcript_.blinded(1)[j - 1].b + transcript_.blinded(2)[j - 1].b;
        const Point w = elgamal::partial_decrypt(u_sum, session_keys_.sk);
        const std::array<Point, 2> bases{Point::generator(), u_sum};
        const std::array<Point, 2> points{session_keys_.pk, w};
        b.shares.push_back(w);
        b.proofs.push_back(
            sigma::prove_eq_logs(session_keys_.sk, bases, points, context(round, j), rng));
      }
      return emit(round, b, rng);
    }
    case Round::kReveal: {
      const Reveal r = make_reveal();
      return emit(round, RevealBody{r.size, r.aggregate_randomness}, rng);
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown round");
}

bool CompareSession::expired(Clock::time_point now) const {
  return now - last_activity_ > config_.timeout;
}

StepResult CompareSession::handle_message(ByteSpan frame, Rng& rng, Clock::time_point now) {
  if (expired(now)) throw Error(ErrorCode::kSessionExpired, "peer silent past the timeout");
  const bool had_verdict = transcript_.verdict().has_value();
  const Frame peek = decode_frame(frame);
  if (peek.role == config_.role) {
    throw Error(ErrorCode::kProtocolOrderViolation, "frame claims our own role");
  }
  if (peek.round == Round::kReveal) {
    throw Error(ErrorCode::kProtocolOrderViolation, "reveal frames go through accept_reveal");
  }
  transcript_.accept(frame);
  last_activity_ = now;

  StepResult out;
  for (;;) {
    const auto owing = transcript_.roles_owing();
    const auto next = transcript_.next_round(config_.role);
    if (!next || *next == Round::kReveal ||
        std::find(owing.begin(), owing.end(), config_.role) == owing.end()) {
      break;
    }
    out.outbound.push_back(make_frame(*next, rng));
  }
  if (!had_verdict && transcript_.verdict()) out.verdict = transcript_.verdict();
  return out;
}

bool CompareSession::is_revealer() const {
  const auto v = transcript_.verdict();
  return v && v->smaller_role == config_.role;
}

Reveal CompareSession::make_reveal() const {
  if (!is_revealer()) {
    throw Error(ErrorCode::kProtocolOrderViolation, "only the smaller party reveals");
  }
  return {size_, aggregate_randomness(bit_randomness_)};
}

Bytes CompareSession::make_reveal_frame(Rng& rng) { return make_frame(Round::kReveal, rng); }

Reveal CompareSession::accept_reveal(ByteSpan frame) {
  if (decode_frame(frame).round != Round::kReveal) {
    throw Error(ErrorCode::kProtocolOrderViolation, "expected a reveal frame");
  }
  transcript_.accept(frame);
  return *transcript_.reveal();
}

}  // namespace deepocean::compare
