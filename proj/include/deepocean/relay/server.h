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

#ifndef DEEPOCEAN_RELAY_SERVER_H_
#define DEEPOCEAN_RELAY_SERVER_H_

// TCP transport for RelayCore: one line-oriented connection per client.
// A connection is bound to an identity key by its first verified envelope;
// lines addressed to a key go to its most recent connection.

#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "deepocean/relay/core.h"

namespace deepocean::relay {

enum class TapDirection { kInbound, kOutbound };

// Observes every line crossing the socket layer; `peer` is the bound key
// when known.
using WireTap =
    std::function<void(TapDirection, const std::optional<Point>& peer, std::string_view line)>;

struct ServerOptions {
  std::string host = "127.0.0.1";
  unsigned short port = 0;  // 0 picks a free port
  std::chrono::milliseconds tick_interval{250};
  unsigned threads = 2;
  std::size_t max_line = 1 << 22;
};

class RelayServer {
 public:
  RelayServer(std::shared_ptr<RelayCore> core, ServerOptions options);
  ~RelayServer();
  RelayServer(const RelayServer&) = delete;
  RelayServer& operator=(const RelayServer&) = delete;

  void set_tap(WireTap tap);
  // Binds and starts the worker threads. Throws Error(kTransport).
  void start();
  void stop();
  unsigned short port() const;
  // Blocks until stop() is called from elsewhere (e.g. a signal handler).
  void wait();

  RelayCore& core() { return *core_; }

  struct Impl;  // shared with the connection type in server.cpp

 private:
  std::shared_ptr<RelayCore> core_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace deepocean::relay

#endif  // DEEPOCEAN_RELAY_SERVER_H_
