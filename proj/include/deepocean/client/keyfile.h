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

#ifndef DEEPOCEAN_CLIENT_KEYFILE_H_
#define DEEPOCEAN_CLIENT_KEYFILE_H_

// Passphrase-encrypted identity keyfile: Argon2id stretches the passphrase,
// XSalsa20-Poly1305 seals the secret scalar. Stored as a small JSON file.

#include <string>

#include "deepocean/elgamal.h"

namespace deepocean::client {

// Writes a fresh key to `path`. Throws Error(kStorage) on I/O failure.
elgamal::KeyPair create_keyfile(const std::string& path, const std::string& passphrase, Rng& rng);

// Throws Error(kStorage) on I/O failure, Error(kDecode) on a malformed file
// and Error(kInvalidArgument) on a wrong passphrase.
elgamal::KeyPair load_keyfile(const std::string& path, const std::string& passphrase);

// Loads the keyfile, generating it on first run.
elgamal::KeyPair load_or_create_keyfile(const std::string& path, const std::string& passphrase,
                                        Rng& rng);

}  // namespace deepocean::client

#endif  // DEEPOCEAN_CLIENT_KEYFILE_H_
