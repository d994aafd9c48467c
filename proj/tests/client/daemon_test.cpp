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

#include <gtest/gtest.h>

#include <httplib.h>

#include <atomic>
#include <thread>

#include "deepocean/client/daemon.h"
#include "deepocean/relay/server.h"

namespace deepocean::client {
namespace {

using wire::Json;

class DaemonTest : public ::testing::Test {
 protected:
  void SetUp() override {
    relay::RelayConfig cfg;
    cfg.bit_width = 8;
    cfg.instruments.push_back({relay::Instrument::parse("BTC/USD"),
                               std::make_shared<PriceFeed>(make_price_source("static:100"),
                                                           std::chrono::seconds(30))});
    core = std::make_shared<relay::RelayCore>(cfg, std::make_shared<relay::RelayStore>(":memory:"), rng);
    server = std::make_unique<relay::RelayServer>(core, relay::ServerOptions{});
    server->start();
    DaemonOptions opts;
    opts.relay_port = server->port();
    opts.reconnect_interval = std::chrono::milliseconds(50);
    daemon = std::make_unique<ClientDaemon>(ClientConfig{}, elgamal::KeyPair::generate(rng), opts);
    daemon->start();
    http = std::make_unique<httplib::Client>("127.0.0.1", daemon->api_port());
    for (int i = 0; i < 200 && !daemon->connected(); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ASSERT_TRUE(daemon->connected());
  }
  void TearDown() override {
    daemon->stop();
    server->stop();
  }

  std::pair<int, Json> post(const std::string& path, const Json& body) {
    auto r = http->Post(path, body.dump(), "application/json");
    return {r->status, Json::parse(r->body)};
  }
  std::pair<int, Json> get(const std::string& path) {
    auto r = http->Get(path);
    return {r->status, Json::parse(r->body)};
  }

  SystemRng rng;
  std::shared_ptr<relay::RelayCore> core;
  std::unique_ptr<relay::RelayServer> server;
  std::unique_ptr<ClientDaemon> daemon;
  std::unique_ptr<httplib::Client> http;
};

TEST_F(DaemonTest, StatusAndRegistration) {
  auto [st, status] = get("/status");
  EXPECT_EQ(st, 200);
  EXPECT_EQ(status["registered"], false);
  EXPECT_EQ(status["connected"], true);
  auto [st2, reg] = post("/register", {{"display_name", "alice"}});
  EXPECT_EQ(st2, 200);
  EXPECT_EQ(reg["registered"], true);
  EXPECT_EQ(reg["relay_key"], wire::hex(core->identity()));
  EXPECT_EQ(post("/register", Json::object()).second["already_registered"], true);
}

TEST_F(DaemonTest, OrderValidationMapsToStatuses) {
  auto [st, j] = post("/orders", {{"buy", "BTC"}, {"sell", "USD"}, {"size", 5}});
  EXPECT_EQ(st, 403);
  EXPECT_EQ(j["code"], "NotRegistered");
  post("/register", {{"display_name", "alice"}});
  std::tie(st, j) = post("/orders", {{"buy", "BTC"}, {"sell", "USD"}, {"size", 0}});
  EXPECT_EQ(st, 400);
  EXPECT_EQ(j["code"], "SizeOutOfRange");
  auto r = http->Post("/orders", R"({"buy":"BTC","sell":"USD","size":18446744073709551616})",
                      "application/json");
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(Json::parse(r->body)["code"], "SizeOutOfRange");
  std::tie(st, j) = post("/orders", {{"buy", "BTC"}, {"sell", "USD"}, {"size", -3}});
  EXPECT_EQ(j["code"], "SizeOutOfRange");
  std::tie(st, j) = post("/orders", {{"buy", "BTC"}, {"sell", "BTC"}, {"size", 3}});
  EXPECT_EQ(j["code"], "SameAssetPair");
  std::tie(st, j) = post("/orders", {{"buy", "BTC"}, {"sell", "USD"}, {"size", 5}, {"limit", "101.5"}});
  EXPECT_EQ(st, 201);
  EXPECT_EQ(j["status"], "open");
  EXPECT_EQ(j["limit"], "101.5");
  const std::string id = j["id"];
  EXPECT_EQ(get("/orders").second.size(), 1u);
  EXPECT_EQ(get("/orders/" + id).second["size"], 5);
  EXPECT_EQ(get("/orders/nope").first, 404);
  std::tie(st, j) = post("/orders/" + id + "/cancel", Json::object());
  EXPECT_EQ(st, 200);
  EXPECT_EQ(j["status"], "cancelled");
}

TEST_F(DaemonTest, DecisionErrors) {
  auto [st, j] = post("/decisions/abc/decide", {{"accept", true}});
  EXPECT_EQ(st, 404);
  EXPECT_EQ(j["code"], "UnknownSession");
  std::tie(st, j) = post("/decisions/abc/decide", {{"accept", "yes"}});
  EXPECT_EQ(st, 400);
  EXPECT_EQ(get("/decisions").second, Json::array());
  EXPECT_EQ(get("/sessions/abc").first, 404);
  EXPECT_EQ(get("/fills").second, Json::array());
}

TEST_F(DaemonTest, EventStreamDeliversAndResumes) {
  std::atomic<bool> seen{false};
  std::string received;
  std::thread reader([&] {
    httplib::Client sse("127.0.0.1", daemon->api_port());
    sse.set_read_timeout(5, 0);
    sse.Get("/events", [&](const char* data, std::size_t n) {
      received.append(data, n);
      if (received.find("event: registered") != std::string::npos) {
        seen = true;
        return false;
      }
      return true;
    });
  });
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  post("/register", {{"display_name", "alice"}});
  reader.join();
  EXPECT_TRUE(seen);
  EXPECT_NE(received.find("id: 1\n"), std::string::npos);

  // Resuming after the last id skips what was already delivered.
  std::string tail;
  httplib::Client sse("127.0.0.1", daemon->api_port());
  sse.set_read_timeout(5, 0);
  httplib::Headers h = {{"Last-Event-ID", "1"}};
  post("/orders", {{"buy", "BTC"}, {"sell", "USD"}, {"size", 2}});
  sse.Get("/events", h, [&](const char* data, std::size_t n) {
    tail.append(data, n);
    return tail.find("\n\n") == std::string::npos;
  });
  EXPECT_EQ(tail.find("id: 1\n"), std::string::npos);
  EXPECT_NE(tail.find("event: order"), std::string::npos);
}

TEST(DaemonOptions, ApiIsLoopbackOnly) {
  SystemRng rng;
  DaemonOptions opts;
  opts.api_host = "0.0.0.0";
  EXPECT_THROW(ClientDaemon(ClientConfig{}, elgamal::KeyPair::generate(rng), opts), Error);
}

}  // namespace
}  // namespace deepocean::client
