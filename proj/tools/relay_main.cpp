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

// deepocean-relay: the matching relay.

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "deepocean/relay/server.h"

namespace {

std::pair<std::string, unsigned short> split_address(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--listen", "expected host:port");
  return {addr.substr(0, colon), static_cast<unsigned short>(std::stoul(addr.substr(colon + 1)))};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace deepocean;
  CLI::App app{"Deep Ocean relay: matches sizeless orders and referees private comparisons"};
  std::string listen = "127.0.0.1:7200";
  std::string data_file = "relay.db";
  std::vector<std::string> instruments{"BTC/USD"};
  std::vector<std::string> prices{"static:100"};
  double price_max_age = 30;
  double session_timeout = 60;
  double confirm_timeout = 60;
  unsigned bit_width = 64;
  app.add_option("--listen", listen, "host:port to accept clients on")->capture_default_str();
  app.add_option("--data-file", data_file, "SQLite file for users, bans and orders")
      ->capture_default_str();
  app.add_option("--instrument", instruments, "BASE/QUOTE; repeat for several")
      ->capture_default_str();
  app.add_option("--price", prices, "static:<value> or url:<endpoint>, one per instrument")
      ->capture_default_str();
  app.add_option("--price-max-age", price_max_age, "seconds a fetched price stays usable")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--session-timeout", session_timeout, "seconds of silence before a party is punished")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--confirm-timeout", confirm_timeout, "seconds both parties have to confirm")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--bit-width", bit_width, "order size bits k")
      ->capture_default_str()
      ->check(CLI::Range(1, 64));
  CLI11_PARSE(app, argc, argv);

  if (instruments.size() != prices.size()) {
    std::cerr << "give exactly one --price per --instrument\n";
    return 2;
  }
  auto seconds = [](double s) {
    return std::chrono::milliseconds(static_cast<std::int64_t>(s * 1000));
  };

  // Signals are taken synchronously by the main thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    relay::RelayConfig config;
    config.bit_width = bit_width;
    config.session_timeout = seconds(session_timeout);
    config.confirm_timeout = seconds(confirm_timeout);
    for (std::size_t i = 0; i < instruments.size(); ++i) {
      config.instruments.push_back(
          {relay::Instrument::parse(instruments[i]),
           std::make_shared<PriceFeed>(make_price_source(prices[i]),
                                       std::chrono::duration_cast<std::chrono::seconds>(
                                           seconds(price_max_age)))});
    }
    SystemRng rng;
    auto store = std::make_shared<relay::RelayStore>(data_file);
    auto core = std::make_shared<relay::RelayCore>(config, store, rng);
    relay::ServerOptions options;
    std::tie(options.host, options.port) = split_address(listen);
    relay::RelayServer server(core, options);
    server.start();
    std::cout << "relay " << wire::hex(core->identity()) << " listening on " << options.host << ":"
              << server.port() << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  } catch (const std::exception& e) {
    std::cerr << "deepocean-relay: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
