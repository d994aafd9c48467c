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

#ifndef DEEPOCEAN_CLIENT_DAEMON_H_
#define DEEPOCEAN_CLIENT_DAEMON_H_

// The trader daemon: one TCP connection to the relay (reconnecting), a
// loopback HTTP+JSON API and a server-sent event stream. Relay lines, API
// calls and timer ticks are serialized through a single lock around the
// ClientCore.

#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include "deepocean/client/core.h"

namespace deepocean::client {

struct DaemonOptions {
  std::string relay_host = "127.0.0.1";
  unsigned short relay_port = 0;
  std::string api_host = "127.0.0.1";  // must be a loopback address
  unsigned short api_port = 0;         // 0 picks a free port
  std::chrono::milliseconds reconnect_interval{500};
  std::chrono::milliseconds request_timeout{5'000};
  std::chrono::milliseconds tick_interval{200};
};

// Sees every line exchanged with the relay; `outbound` is true for lines
// this daemon sends.
using LineTap = std::function<void(bool outbound, std::string_view line)>;

class ClientDaemon {
 public:
  // Throws Error(kInvalidArgument) for a non-loopback API host.
  ClientDaemon(ClientConfig config, elgamal::KeyPair identity, DaemonOptions options);
  ~ClientDaemon();
  ClientDaemon(const ClientDaemon&) = delete;
  ClientDaemon& operator=(const ClientDaemon&) = delete;

  void set_tap(LineTap tap);
  void set_frame_tamper(FrameTamper tamper);

  // Binds the API and starts connecting to the relay. Throws Error(kTransport)
  // when the API port cannot be bound.
  void start();
  void stop();
  // Blocks until stop().
  void wait();

  unsigned short api_port() const;
  bool connected() const;

  // Runs `f` with exclusive access to the core.
  void with_core(const std::function<void(ClientCore&)>& f);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace deepocean::client

#endif  // DEEPOCEAN_CLIENT_DAEMON_H_
