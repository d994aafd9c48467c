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

#include <deque>
#include <filesystem>
#include <fstream>
#include <random>

#include "deepocean/client/core.h"
#include "deepocean/client/keyfile.h"
#include "deepocean/relay/core.h"

namespace deepocean::client {
namespace {

using wire::Json;

// Two or more ClientCores wired to one in-process RelayCore.
struct Market {
  DeterministicRng rng{9};
  std::shared_ptr<relay::RelayStore> store = std::make_shared<relay::RelayStore>(":memory:");
  std::unique_ptr<relay::RelayCore> relay;
  struct Node {
    std::unique_ptr<ClientCore> core;
    std::vector<std::string> sent;  // every line this client emitted
  };
  std::deque<std::unique_ptr<Node>> nodes;
  std::deque<std::pair<Node*, std::string>> to_relay;
  Clock::time_point now = Clock::now();

  explicit Market(unsigned k = 8, std::string price = "static:100") {
    relay::RelayConfig c;
    c.bit_width = k;
    c.instruments.push_back({relay::Instrument::parse("BTC/USD"),
                             std::make_shared<PriceFeed>(make_price_source(price),
                                                         std::chrono::seconds(5))});
    relay = std::make_unique<relay::RelayCore>(c, store, rng);
  }

  ClientCore& add(ClientConfig cfg = {}) {
    auto node = std::make_unique<Node>();
    Node* raw = node.get();
    if (!cfg.reference) {
      cfg.reference = std::make_shared<PriceFeed>(make_price_source("static:100"),
                                                  std::chrono::seconds(5));
    }
    node->core = std::make_unique<ClientCore>(cfg, elgamal::KeyPair::generate(rng), rng,
                                              [this, raw](std::string line) {
                                                raw->sent.push_back(line);
                                                to_relay.emplace_back(raw, std::move(line));
                                              });
    nodes.push_back(std::move(node));
    return *raw->core;
  }

  Node& node_of(const ClientCore& c) {
    for (auto& n : nodes) {
      if (n->core.get() == &c) return *n;
    }
    throw std::logic_error("unknown client");
  }

  void deliver(const std::vector<relay::Outgoing>& out, Node* origin) {
    for (const auto& o : out) {
      if (!o.to) {
        if (origin) origin->core->on_line(o.line, now);
        continue;
      }
      for (auto& n : nodes) {
        if (n->core->identity().pk == *o.to) n->core->on_line(o.line, now);
      }
    }
  }

  void run() {
    while (!to_relay.empty()) {
      auto [n, line] = std::move(to_relay.front());
      to_relay.pop_front();
      deliver(relay->handle(line, now).out, n);
    }
  }

  void tick() {
    for (auto& n : nodes) n->core->tick(now);
    deliver(relay->tick(now), nullptr);
    run();
  }

  void enroll(ClientCore& c, const std::string& name) {
    c.register_user(name);
    run();
    ASSERT_TRUE(c.registered());
  }

  std::string pending_session(ClientCore& c) {
    auto d = c.decisions(now);
    return d.empty() ? "" : d.front().session_id;
  }

  void accept_all() {
    for (auto& n : nodes) {
      for (const auto& d : n->core->decisions(now)) n->core->decide(d.session_id, true, now);
    }
    run();
  }
};

std::uint64_t filled(const ClientCore& c, const std::string& local) {
  std::uint64_t total = 0;
  for (const auto& f : c.fills()) {
    if (f.local_order == local) total += f.size;
  }
  return total;
}

TEST(ClientConfig, ToleranceBounds) {
  DeterministicRng rng(1);
  auto make = [&](const char* tol) {
    ClientConfig cfg;
    cfg.tolerance = Decimal::parse(tol);
    ClientCore c(cfg, elgamal::KeyPair::generate(rng), rng, [](std::string) {});
  };
  EXPECT_NO_THROW(make("0.02"));
  EXPECT_THROW(make("0"), Error);
  EXPECT_THROW(make("0.5"), Error);
}

TEST(ClientOrders, SizeRangeAndRegistration) {
  Market m;
  ClientCore& a = m.add();
  try {
    a.place_order("BTC", "USD", 5, std::nullopt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotRegistered);
  }
  m.enroll(a, "alice");
  try {
    a.place_order("BTC", "USD", 0, std::nullopt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSizeOutOfRange);
  }
}

TEST(ClientOrders, WireOrderCarriesNoSize) {
  Market m;
  ClientCore& a = m.add();
  m.enroll(a, "alice");
  const std::uint64_t size = 5;
  const auto& o = a.place_order("BTC", "USD", size, Decimal::parse("120"));
  m.run();
  EXPECT_EQ(a.order(o.local_id)->status, OrderStatus::kOpen);
  const std::string line = m.node_of(a).sent.back();
  const Json j = Json::parse(line);
  EXPECT_EQ(j["type"], "ORDER");
  EXPECT_EQ(j["payload"], (Json{{"buy", "BTC"}, {"sell", "USD"}, {"limit", "120"}}));
}

TEST(ClientOrders, ReregisteringTheSameKeyIsAccepted) {
  Market m;
  ClientCore& a = m.add();
  m.enroll(a, "alice");
  const auto seq = a.register_user("alice");
  m.run();
  ASSERT_TRUE(a.result(seq));
  EXPECT_TRUE(a.result(seq)->ok);
  EXPECT_EQ(a.result(seq)->code, "DuplicateKey");
}

TEST(ClientPrice, ToleranceExamples) {
  DeterministicRng rng(2);
  auto check = [&](const char* quoted, const char* reference) {
    ClientConfig cfg;
    cfg.reference = std::make_shared<PriceFeed>(make_price_source(std::string("static:") + reference),
                                                std::chrono::seconds(5));
    ClientCore c(cfg, elgamal::KeyPair::generate(rng), rng, [](std::string) {});
    wire::MatchTicket t;
    t.market_price = Decimal::parse(quoted);
    return c.check_price(t).result;
  };
  EXPECT_EQ(check("100", "100"), PriceCheck::kPass);
  EXPECT_EQ(check("103", "100"), PriceCheck::kFail);
  EXPECT_EQ(check("102", "100"), PriceCheck::kPass);
  EXPECT_EQ(check("98", "100"), PriceCheck::kPass);
  EXPECT_EQ(check("97.99", "100"), PriceCheck::kFail);
  EXPECT_EQ(check("100", "0"), PriceCheck::kUnavailable);
}

TEST(ClientDecisions, NoConfirmWithoutDecide) {
  Market m;
  ClientCore& a = m.add();
  ClientCore& b = m.add();
  m.enroll(a, "a");
  m.enroll(b, "b");
  a.place_order("BTC", "USD", 5, std::nullopt);
  b.place_order("USD", "BTC", 3, std::nullopt);
  m.run();
  ASSERT_FALSE(m.pending_session(a).empty());
  for (auto* c : {&a, &b}) {
    for (const auto& line : m.node_of(*c).sent) EXPECT_EQ(line.find("CONFIRM"), std::string::npos);
  }
}

TEST(ClientDecisions, DecideTwiceAndExpiry) {
  Market m;
  ClientConfig cfg;
  cfg.decision_ttl = std::chrono::seconds(5);
  ClientCore& a = m.add(cfg);
  ClientCore& b = m.add(cfg);
  m.enroll(a, "a");
  m.enroll(b, "b");
  const auto& oa = a.place_order("BTC", "USD", 5, std::nullopt);
  b.place_order("USD", "BTC", 3, std::nullopt);
  m.run();
  const std::string sid = m.pending_session(a);
  a.decide(sid, false, m.now);
  m.run();
  EXPECT_EQ(a.order(oa.local_id)->status, OrderStatus::kOpen);
  try {
    a.decide(sid, true, m.now);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownSession);
  }
  // b's decision for the aborted session is withdrawn by the relay's ABORT.
  EXPECT_TRUE(b.decisions(m.now).empty());

  // A fresh counterparty; this time the window closes.
  ClientCore& c = m.add(cfg);
  m.enroll(c, "c");
  c.place_order("USD", "BTC", 2, std::nullopt);
  m.run();
  const std::string sid2 = m.pending_session(c);
  ASSERT_FALSE(sid2.empty());
  m.now += std::chrono::seconds(6);
  try {
    c.decide(sid2, true, m.now);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDecisionExpired);
  }
}

TEST(ClientDecisions, AutoConfirmOnlyOnPassingPrice) {
  {
    Market m(8, "static:103");
    ClientConfig cfg;
    cfg.auto_confirm = true;
    ClientCore& a = m.add(cfg);
    ClientCore& b = m.add(cfg);
    m.enroll(a, "a");
    m.enroll(b, "b");
    a.place_order("BTC", "USD", 5, std::nullopt);
    b.place_order("USD", "BTC", 3, std::nullopt);
    m.run();
    auto d = a.decisions(m.now);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].price.result, PriceCheck::kFail);
    EXPECT_EQ(*d[0].price.reference, Decimal::from_int(100));
    for (const auto& line : m.node_of(a).sent) EXPECT_EQ(line.find("CONFIRM"), std::string::npos);
  }
  {
    Market m;
    ClientConfig cfg;
    cfg.auto_confirm = true;
    ClientCore& a = m.add(cfg);
    ClientCore& b = m.add(cfg);
    m.enroll(a, "a");
    m.enroll(b, "b");
    a.place_order("BTC", "USD", 5, std::nullopt);
    b.place_order("USD", "BTC", 3, std::nullopt);
    m.run();
    EXPECT_EQ(a.fills().size(), 1u);
    EXPECT_EQ(b.fills().size(), 1u);
  }
}

TEST(ClientProtocol, FiveVersusThree) {
  Market m;
  ClientCore& a = m.add();
  ClientCore& b = m.add();
  m.enroll(a, "a");
  m.enroll(b, "b");
  const std::string oa = a.place_order("BTC", "USD", 5, std::nullopt).local_id;
  const std::string ob = b.place_order("USD", "BTC", 3, std::nullopt).local_id;
  m.run();
  m.accept_all();
  ASSERT_EQ(b.fills().size(), 1u);
  EXPECT_EQ(b.fills()[0].size, 3u);
  EXPECT_EQ(b.fills()[0].price, Decimal::from_int(100));
  EXPECT_FALSE(b.fills()[0].bought);
  EXPECT_EQ(b.order(ob)->status, OrderStatus::kFilled);
  ASSERT_EQ(a.fills().size(), 1u);
  EXPECT_EQ(a.fills()[0].size, 3u);
  EXPECT_TRUE(a.fills()[0].bought);
  EXPECT_EQ(a.order(oa)->residual, 2u);
  EXPECT_EQ(a.order(oa)->status, OrderStatus::kOpen);
  const auto s = a.session(a.fills()[0].session_id);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->state, "settled");
  EXPECT_EQ(s->progress, 16u);
  // The relay agrees the residual is back on the book.
  bool open = false;
  for (const auto& o : m.relay->orders()) {
    if (o.order_id == a.order(oa)->relay_id) open = o.state == relay::OrderState::kOpen;
  }
  EXPECT_TRUE(open);
}

// Before the reveal, none of a client's lines contain its size in any of
// the encodings a careless implementation might use.
TEST(ClientProtocol, NoSizeBeforeReveal) {
  Market m(64);
  ClientCore& a = m.add();
  ClientCore& b = m.add();
  m.enroll(a, "a");
  m.enroll(b, "b");
  const std::uint64_t size_a = 0x1234567, size_b = 0x89ab;
  a.place_order("BTC", "USD", size_a, std::nullopt);
  b.place_order("USD", "BTC", size_b, std::nullopt);
  m.run();
  m.accept_all();
  ASSERT_EQ(a.fills().size(), 1u);
  for (auto [c, size] : {std::pair{&a, size_a}, std::pair{&b, size_b}}) {
    const auto be = [&] {
      Bytes b8(8);
      for (int i = 0; i < 8; ++i) b8[i] = static_cast<std::uint8_t>(size >> (8 * (7 - i)));
      return b8;
    }();
    const std::vector<std::string> needles = {
        to_hex(be), to_hex(Scalar::from_u64(size).to_bytes()),
        to_hex(Point::mul_base(Scalar::from_u64(size)).to_bytes()), "\"size\""};
    for (const auto& line : m.node_of(*c).sent) {
      if (Json::parse(line)["type"] == "REVEAL") break;
      for (const auto& n : needles) EXPECT_EQ(line.find(n), std::string::npos) << n;
    }
  }
}

TEST(ClientProtocol, TieFillsBothAndClosesTheLargerSide) {
  Market m;
  ClientCore& a = m.add();
  ClientCore& b = m.add();
  m.enroll(a, "a");
  m.enroll(b, "b");
  const std::string oa = a.place_order("BTC", "USD", 4, std::nullopt).local_id;
  const std::string ob = b.place_order("USD", "BTC", 4, std::nullopt).local_id;
  m.run();
  m.accept_all();
  EXPECT_EQ(a.order(oa)->status, OrderStatus::kFilled);  // role 1 reveals on a tie
  EXPECT_EQ(b.order(ob)->status, OrderStatus::kFilled);
  EXPECT_EQ(b.order(ob)->residual, 0u);
  for (const auto& o : m.relay->orders()) {
    EXPECT_TRUE(o.state == relay::OrderState::kSettled || o.state == relay::OrderState::kCancelled);
  }
}

TEST(ClientProtocol, HeldResidualWhenResubmitIsManual) {
  Market m;
  ClientConfig manual;
  manual.auto_resubmit = false;
  ClientCore& a = m.add(manual);
  ClientCore& b = m.add();
  m.enroll(a, "a");
  m.enroll(b, "b");
  const std::string oa = a.place_order("BTC", "USD", 5, std::nullopt).local_id;
  b.place_order("USD", "BTC", 3, std::nullopt);
  m.run();
  m.accept_all();
  EXPECT_EQ(a.order(oa)->status, OrderStatus::kHeld);
  EXPECT_EQ(a.order(oa)->residual, 2u);
  const std::string fresh = a.resubmit(oa).local_id;
  m.run();
  EXPECT_EQ(a.order(oa)->status, OrderStatus::kCancelled);
  EXPECT_EQ(a.order(fresh)->size, 2u);
  EXPECT_EQ(a.order(fresh)->status, OrderStatus::kOpen);
}

TEST(ClientProtocol, CounterpartyCheatingIsPunished) {
  Market m;
  ClientCore& honest = m.add();
  ClientCore& cheat = m.add();
  cheat.set_frame_tamper(corrupt_bit_proofs());
  m.enroll(honest, "h");
  m.enroll(cheat, "c");
  const std::string oh = honest.place_order("BTC", "USD", 5, std::nullopt).local_id;
  cheat.place_order("USD", "BTC", 2, std::nullopt);  // bits 0 and 1 differ
  m.run();
  m.accept_all();
  EXPECT_TRUE(cheat.banned());
  EXPECT_FALSE(honest.banned());
  EXPECT_EQ(honest.order(oh)->status, OrderStatus::kOpen);
  EXPECT_EQ(honest.order(oh)->residual, 5u);
  bool saw = false;
  for (const auto& e : honest.events_after(0)) {
    saw |= e.type == "punished" && e.data["code"] == "PeerPunished" && !e.data["self"].get<bool>();
  }
  EXPECT_TRUE(saw);
  EXPECT_EQ(m.relay->user(cheat.identity().pk)->status, relay::UserStatus::kBanned);
}

// Residual accounting: one large order against a stream of smaller ones.
TEST(ClientProtocol, ResidualAccountingProperty) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 4; ++trial) {
    Market m(8);
    ClientCore& big = m.add();
    m.enroll(big, "big");
    const std::uint64_t size = 100 + gen() % 100;
    const std::string ob = big.place_order("BTC", "USD", size, std::nullopt).local_id;
    m.run();
    for (int i = 0; i < 3; ++i) {
      ClientCore& small = m.add();
      m.enroll(small, "s" + std::to_string(i));
      small.place_order("USD", "BTC", 1 + gen() % 60, std::nullopt);
      m.run();
      m.accept_all();
      const LocalOrder& o = *big.order(ob);
      EXPECT_EQ(o.size, filled(big, ob) + o.residual);
    }
    EXPECT_EQ(big.fills().size(), 3u);
  }
}

TEST(Keyfile, RoundTripWrongPassphraseAndTamper) {
  DeterministicRng rng(4);
  const auto path = (std::filesystem::temp_directory_path() / "deepocean_keyfile_test.json").string();
  std::filesystem::remove(path);
  const auto created = load_or_create_keyfile(path, "correct horse", rng);
  const auto loaded = load_or_create_keyfile(path, "correct horse", rng);
  EXPECT_EQ(created.pk, loaded.pk);
  EXPECT_EQ(created.sk, loaded.sk);
  try {
    load_keyfile(path, "wrong");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text.find(to_hex(created.sk.to_bytes())), std::string::npos);
  auto j = Json::parse(text);
  auto sealed = j["sealed"].get<std::string>();
  sealed[0] = sealed[0] == '0' ? '1' : '0';
  j["sealed"] = sealed;
  std::ofstream(path) << j.dump();
  EXPECT_THROW(load_keyfile(path, "correct horse"), Error);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace deepocean::client
