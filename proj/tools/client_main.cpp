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

// deepocean-client: the trader daemon and a thin CLI over its local API.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "deepocean/client/daemon.h"
#include "deepocean/client/keyfile.h"

namespace {

using deepocean::wire::Json;

std::pair<std::string, unsigned short> split_address(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("expected host:port, got " + addr);
  return {addr.substr(0, colon), static_cast<unsigned short>(std::stoul(addr.substr(colon + 1)))};
}

std::string read_passphrase(const std::string& file, const std::string& env) {
  if (!file.empty()) {
    std::ifstream in(file);
    std::string line;
    if (!in || !std::getline(in, line)) throw std::runtime_error("cannot read " + file);
    return line;
  }
  if (const char* v = std::getenv(env.c_str())) return v;
  throw std::runtime_error("set " + env + " or pass --passphrase-file");
}

// Talks to a running daemon and prints its JSON answer.
int call(const std::string& api, const std::string& method, const std::string& path,
         const Json& body = nullptr) {
  const auto [host, port] = split_address(api);
  httplib::Client cli(host, port);
  cli.set_read_timeout(15, 0);
  auto res = method == "GET" ? cli.Get(path)
                             : cli.Post(path, body.is_null() ? "{}" : body.dump(), "application/json");
  if (!res) {
    std::cerr << "cannot reach the daemon at " << api << ": " << httplib::to_string(res.error())
              << "\n";
    return 3;
  }
  try {
    std::cout << Json::parse(res->body).dump(2) << "\n";
  } catch (const Json::exception&) {
    std::cout << res->body << "\n";
  }
  return res->status < 300 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace deepocean;
  CLI::App app{"Deep Ocean trader client"};
  app.require_subcommand(1);
  std::string api = "127.0.0.1:7300";
  app.add_option("--api", api, "address of the daemon's local API")->capture_default_str();

  // daemon
  auto* daemon = app.add_subcommand("daemon", "run the trader daemon");
  std::string relay = "127.0.0.1:7200";
  std::string keyfile = "deepocean.key";
  std::string passphrase_file;
  std::string passphrase_env = "DEEPOCEAN_PASSPHRASE";
  std::string reference;
  std::string tolerance = "0.02";
  bool auto_confirm = false;
  bool manual_resubmit = false;
  double decision_ttl = 30;
  std::string fault;
  daemon->add_option("--relay", relay, "relay host:port")->capture_default_str();
  daemon->add_option("--keyfile", keyfile, "identity keyfile; created on first run")
      ->capture_default_str();
  daemon->add_option("--passphrase-file", passphrase_file, "file whose first line is the passphrase");
  daemon->add_option("--passphrase-env", passphrase_env, "environment variable holding the passphrase")
      ->capture_default_str();
  daemon->add_option("--reference", reference, "independent price source: static:<v> or url:<endpoint>");
  daemon->add_option("--tolerance", tolerance, "accepted relative price deviation")
      ->capture_default_str();
  daemon->add_flag("--auto-confirm", auto_confirm, "confirm matches whose price check passes");
  daemon->add_flag("--manual-resubmit", manual_resubmit, "hold residuals instead of keeping them on the book");
  daemon->add_option("--decision-ttl", decision_ttl, "seconds a match waits for a decision")
      ->capture_default_str();
  daemon->add_option("--fault", fault, "testing only: bad-bit-proof")->group("");

  auto* reg = app.add_subcommand("register", "register this daemon's key with the relay");
  std::string name;
  reg->add_option("name", name, "display name");

  auto* order = app.add_subcommand("order", "place an order; the size stays local");
  std::string buy, sell, size;
  std::string limit;
  order->add_option("buy", buy, "asset to buy")->required();
  order->add_option("sell", sell, "asset to sell")->required();
  order->add_option("size", size, "size in base units")->required();
  order->add_option("--limit", limit, "limit price in QUOTE per BASE");

  auto* orders = app.add_subcommand("orders", "list local orders");
  auto* cancel = app.add_subcommand("cancel", "cancel an open order or drop a held residual");
  std::string order_id;
  cancel->add_option("order", order_id, "local order id")->required();

  auto* decisions = app.add_subcommand("decisions", "list matches awaiting a decision");
  auto* decide = app.add_subcommand("decide", "accept or decline a match");
  std::string session, answer;
  decide->add_option("session", session, "session id")->required();
  decide->add_option("answer", answer, "yes or no")->required()->check(CLI::IsMember({"yes", "no"}));

  auto* sessions = app.add_subcommand("sessions", "list comparison sessions");
  auto* status = app.add_subcommand("status", "daemon and relay connection status");
  auto* fills = app.add_subcommand("fills", "fill history");

  CLI11_PARSE(app, argc, argv);

  try {
    if (daemon->parsed()) {
      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);

      SystemRng rng;
      const auto identity =
          client::load_or_create_keyfile(keyfile, read_passphrase(passphrase_file, passphrase_env), rng);
      client::ClientConfig config;
      if (!reference.empty()) {
        config.reference =
            std::make_shared<PriceFeed>(make_price_source(reference), std::chrono::seconds(30));
      }
      config.tolerance = Decimal::parse(tolerance);
      config.auto_confirm = auto_confirm;
      config.auto_resubmit = !manual_resubmit;
      config.decision_ttl = std::chrono::milliseconds(static_cast<std::int64_t>(decision_ttl * 1000));
      client::DaemonOptions options;
      std::tie(options.relay_host, options.relay_port) = split_address(relay);
      std::tie(options.api_host, options.api_port) = split_address(api);
      client::ClientDaemon d(config, identity, options);
      if (fault == "bad-bit-proof") {
        d.set_frame_tamper(client::corrupt_bit_proofs());
      } else if (!fault.empty()) {
        throw std::invalid_argument("unknown fault " + fault);
      }
      d.start();
      std::cout << "client " << wire::hex(identity.pk) << " api on " << options.api_host << ":"
                << d.api_port() << std::endl;
      int sig = 0;
      sigwait(&signals, &sig);
      d.stop();
      return 0;
    }
    if (reg->parsed()) return call(api, "POST", "/register", Json{{"display_name", name}});
    if (order->parsed()) {
      Json body = {{"buy", buy}, {"sell", sell}, {"size", size}};
      if (!limit.empty()) body["limit"] = limit;
      return call(api, "POST", "/orders", body);
    }
    if (orders->parsed()) return call(api, "GET", "/orders");
    if (cancel->parsed()) return call(api, "POST", "/orders/" + order_id + "/cancel");
    if (decisions->parsed()) return call(api, "GET", "/decisions");
    if (decide->parsed()) {
      return call(api, "POST", "/decisions/" + session + "/decide", Json{{"accept", answer == "yes"}});
    }
    if (sessions->parsed()) return call(api, "GET", "/sessions");
    if (status->parsed()) return call(api, "GET", "/status");
    if (fills->parsed()) return call(api, "GET", "/fills");
  } catch (const std::exception& e) {
    std::cerr << "deepocean-client: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
