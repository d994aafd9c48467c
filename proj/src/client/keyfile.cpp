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

#include "deepocean/client/keyfile.h"

#include <sodium.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "deepocean/wire.h"

namespace deepocean::client {

namespace {

constexpr int kVersion = 1;

std::array<std::uint8_t, crypto_secretbox_KEYBYTES> derive(const std::string& passphrase,
                                                          ByteSpan salt, std::uint64_t ops,
                                                          std::size_t mem) {
  std::array<std::uint8_t, crypto_secretbox_KEYBYTES> key{};
  if (crypto_pwhash(key.data(), key.size(), passphrase.data(), passphrase.size(), salt.data(),
                    ops, mem, crypto_pwhash_ALG_ARGON2ID13) != 0) {
    throw Error(ErrorCode::kStorage, "key derivation ran out of memory");
  }
  return key;
}

}  // namespace

elgamal::KeyPair create_keyfile(const std::string& path, const std::string& passphrase, Rng& rng) {
  const auto kp = elgamal::KeyPair::generate(rng);
  Bytes salt(crypto_pwhash_SALTBYTES), nonce(crypto_secretbox_NONCEBYTES);
  rng.fill(salt);
  rng.fill(nonce);
  const std::uint64_t ops = crypto_pwhash_OPSLIMIT_INTERACTIVE;
  const std::size_t mem = crypto_pwhash_MEMLIMIT_INTERACTIVE;
  auto key = derive(passphrase, salt, ops, mem);
  const auto secret = kp.sk.to_bytes();
  Bytes sealed(secret.size() + crypto_secretbox_MACBYTES);
  crypto_secretbox_easy(sealed.data(), secret.data(), secret.size(), nonce.data(), key.data());
  sodium_memzero(key.data(), key.size());

  const wire::Json j = {{"version", kVersion},
                        {"public_key", wire::hex(kp.pk)},
                        {"kdf", {{"alg", "argon2id13"}, {"ops", ops}, {"mem", mem}, {"salt", to_hex(salt)}}},
                        {"nonce", to_hex(nonce)},
                        {"sealed", to_hex(sealed)}};
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::trunc);
  out << j.dump(2) << "\n";
  if (!out) throw Error(ErrorCode::kStorage, "cannot write keyfile " + path);
  out.close();
  std::filesystem::permissions(path, std::filesystem::perms::owner_read |
                                         std::filesystem::perms::owner_write);
  return kp;
}

elgamal::KeyPair load_keyfile(const std::string& path, const std::string& passphrase) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kStorage, "cannot read keyfile " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  wire::Json j;
  Bytes salt, nonce, sealed;
  std::uint64_t ops = 0;
  std::size_t mem = 0;
  Point pk;
  try {
    j = wire::Json::parse(ss.str());
    if (j.at("version").get<int>() != kVersion) throw DecodeError("unsupported keyfile version");
    salt = from_hex(j.at("kdf").at("salt").get<std::string>());
    ops = j.at("kdf").at("ops").get<std::uint64_t>();
    mem = j.at("kdf").at("mem").get<std::size_t>();
    nonce = from_hex(j.at("nonce").get<std::string>());
    sealed = from_hex(j.at("sealed").get<std::string>());
    pk = wire::point_field(j, "public_key");
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw DecodeError(std::string("malformed keyfile: ") + e.what());
  }
  if (salt.size() != crypto_pwhash_SALTBYTES || nonce.size() != crypto_secretbox_NONCEBYTES ||
      sealed.size() != Scalar::kSize + crypto_secretbox_MACBYTES) {
    throw DecodeError("malformed keyfile");
  }
  auto key = derive(passphrase, salt, ops, mem);
  Bytes secret(Scalar::kSize);
  const int rc = crypto_secretbox_open_easy(secret.data(), sealed.data(), sealed.size(),
                                            nonce.data(), key.data());
  sodium_memzero(key.data(), key.size());
  if (rc != 0) throw Error(ErrorCode::kInvalidArgument, "wrong passphrase for " + path);
  const auto kp = elgamal::KeyPair::from_secret(Scalar::from_bytes(secret));
  sodium_memzero(secret.data(), secret.size());
  if (kp.pk != pk) throw DecodeError("keyfile public key does not match its secret");
  return kp;
}

elgamal::KeyPair load_or_create_keyfile(const std::string& path, const std::string& passphrase,
                                        Rng& rng) {
  if (std::filesystem::exists(path)) return load_keyfile(path, passphrase);
  return create_keyfile(path, passphrase, rng);
}

}  // namespace deepocean::client
