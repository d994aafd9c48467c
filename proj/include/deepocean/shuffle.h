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

#ifndef DEEPOCEAN_SHUFFLE_H_
#define DEEPOCEAN_SHUFFLE_H_

// Verifiable re-encryption shuffle of ElGamal ciphertext vectors.
//
// outputs[i] = inputs[permutation[i]] + (rerand[i]*pk, rerand[i]*G)
//
// The argument is a commitment-consistent proof of shuffle: the prover
// commits to the permutation matrix column by column, proves the committed
// matrix is a permutation through a chain of commitments to the products of
// per-element challenges, and proves the outputs re-encrypt the permuted
// inputs under the same challenge vector. Proof bytes are opaque to callers
// and start with an algorithm identifier.

#include <cstdint>
#include <vector>

#include "deepocean/elgamal.h"
#include "deepocean/sigma.h"

namespace deepocean::shuffle {

inline constexpr std::uint8_t kAlgorithmPermutationCommitment = 0x01;

struct ShuffleInstance {
  std::vector<elgamal::Ciphertext> inputs;
  std::vector<elgamal::Ciphertext> outputs;
  Point pk;
};

struct ShuffleWitness {
  std::vector<std::uint32_t> permutation;
  std::vector<Scalar> rerand;
};

struct ShuffleResult {
  std::vector<elgamal::Ciphertext> outputs;
  ShuffleWitness witness;
};

// Uniform permutation and fresh nonzero re-randomizers.
// Throws Error(kMalformedStatement) for empty input.
ShuffleResult shuffle(const std::vector<elgamal::Ciphertext>& inputs,
                      const Point& pk, Rng& rng);

// Deterministic application of a given witness. Throws
// Error(kMalformedStatement) unless the permutation is a bijection of the
// right size and every re-randomizer is nonzero.
std::vector<elgamal::Ciphertext> apply_shuffle(
    const std::vector<elgamal::Ciphertext>& inputs, const ShuffleWitness& witness,
    const Point& pk);

Bytes prove_shuffle(const ShuffleInstance& instance, const ShuffleWitness& witness,
                    const sigma::ProofContext& ctx, Rng& rng);

// False on any malformed or non-verifying proof.
bool verify_shuffle(const ShuffleInstance& instance, ByteSpan proof,
                    const sigma::ProofContext& ctx);

}  // namespace deepocean::shuffle

#endif  // DEEPOCEAN_SHUFFLE_H_
