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

#ifndef DEEPOCEAN_RNG_H_
#define DEEPOCEAN_RNG_H_

#include <array>
#include <cstdint>
#include <span>

namespace deepocean {

// Source of all protocol randomness. Every random choice in the library is
// drawn through this interface so tests can substitute a seeded stream.
class Rng {
 public:
  virtual ~Rng() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

// OS randomness (libsodium randombytes).
class SystemRng final : public Rng {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

// ChaCha20 keystream under a key derived from `seed`. Not for production keys.
class DeterministicRng final : public Rng {
 public:
  explicit DeterministicRng(std::uint64_t seed);
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::array<std::uint8_t, 32> key_{};
  std::uint64_t counter_ = 0;
};

// Process-wide SystemRng instance.
Rng& system_rng();

}  // namespace deepocean

#endif  // DEEPOCEAN_RNG_H_
