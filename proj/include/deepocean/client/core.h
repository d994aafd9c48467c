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

#ifndef DEEPOCEAN_CLIENT_CORE_H_
#define DEEPOCEAN_CLIENT_CORE_H_

// Trader-side state owner. Transport agnostic: relay lines go in through
// on_line(), lines for the relay come out through the sender callback, and
// the local API calls the public operations. Not thread-safe; the daemon
// serializes every call.

#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "deepocean/compare/session.h"
#include "deepocean/decimal.h"
#include "deepocean/elgamal.h"
#include "deepocean/price.h"
#include "deepocean/wire.h"

namespace deepocean::client {

using Clock = std::chrono::steady_clock;

struct ClientConfig {
  // Reference price source; null means no independent check is possible.
  std::shared_ptr<PriceFeed> reference;
  Decimal tolerance = Decimal::parse("0.02");  // fraction of the reference
  bool auto_confirm = false;
  bool auto_resubmit = true;
  // How long a match waits for the human; keep below the relay's timeout.
  std::chrono::milliseconds decision_ttl{30'000};
  std::string display_name;
};

enum class OrderStatus { kSubmitting, kOpen, kMatched, kComparing, kFilled, kHeld, kCancelled, kRejected };
std::string_view order_status_name(OrderStatus s);

struct StatusChange {
  std::int64_t at_ms = 0;
  OrderStatus status = OrderStatus::kSubmitting;
  std::string note;
};

struct LocalOrder {
  std::string local_id;
  std::string relay_id;  // empty until acknowledged
  std::string buy;
  std::string sell;
  std::optional<Decimal> limit;
  std::uint64_t size = 0;      // original size; never leaves this process unrevealed
  std::uint64_t residual = 0;  // size minus every fill so far
  OrderStatus status = OrderStatus::kSubmitting;
  std::vector<StatusChange> timeline;
};

struct Fill {
  std::string session_id;
  std::string local_order;
  std::string relay_order;
  std::string base;
  std::string quote;
  Decimal price;
  std::uint64_t size = 0;
  bool bought = false;  // bought base with quote
  std::int64_t at_ms = 0;
};

enum class PriceCheck { kPass, kFail, kUnavailable };
std::string_view price_check_name(PriceCheck c);

struct PriceVerdict {
  PriceCheck result = PriceCheck::kUnavailable;
  Decimal quoted;
  std::optional<Decimal> reference;
};

struct PendingDecision {
  std::string session_id;
  std::string local_order;
  wire::MatchTicket ticket;
  PriceVerdict price;
  Clock::time_point expires_at;
  std::int64_t expires_at_ms = 0;  // wall clock, for display
};

struct SessionView {
  std::string session_id;
  std::string local_order;
  int role = 0;
  std::string state;  // awaiting_decision, confirmed, comparing, verdict, settled, aborted, punished
  unsigned progress = 0;
  std::optional<compare::Verdict> verdict;
  std::optional<std::uint64_t> fill_size;
  std::string reason;
  wire::MatchTicket ticket;
};

struct Event {
  std::uint64_t id = 0;
  std::string type;
  wire::Json data;
};

// Outcome of a request the relay answers (REGISTER, ORDER, CANCEL).
struct RequestResult {
  bool ok = false;
  std::string code;
  std::string message;
};

// Rewrites an outbound compare frame before it is sent (fault injection).
using FrameTamper = std::function<Bytes(const Bytes& frame, const Scalar& identity_sk, Rng& rng)>;

// Swaps the first two bit proofs in the bits frame, so they no longer verify
// whenever the first two bits differ and the frame still carries a valid
// signature.
FrameTamper corrupt_bit_proofs();

class ClientCore {
 public:
  using Sender = std::function<void(std::string line)>;

  // Throws Error(kInvalidArgument) unless 0 < tolerance < 0.5.
  ClientCore(ClientConfig config, elgamal::KeyPair identity, Rng& rng, Sender send);

  // Returns the request seq; the answer appears via result().
  std::uint64_t register_user(const std::string& display_name);
  // Throws Error(kSizeOutOfRange) for size 0 and Error(kNotRegistered)
  // before the relay accepted a registration. The relay only sees the assets
  // and limit.
  const LocalOrder& place_order(const std::string& buy, const std::string& sell,
                                std::uint64_t size, std::optional<Decimal> limit);
  // Cancels an open order (or abandons a held residual).
  void cancel_order(const std::string& local_id);
  // Puts a held residual back on the book as a fresh order.
  const LocalOrder& resubmit(const std::string& local_id);

  // Throws Error(kUnknownSession) or Error(kDecisionExpired).
  void decide(const std::string& session_id, bool accept, Clock::time_point now = Clock::now());

  PriceVerdict check_price(const wire::MatchTicket& ticket) const;

  void on_line(std::string_view line, Clock::time_point now = Clock::now());
  // The transport reconnected: rebind by re-registering when already known.
  void on_connected();
  void tick(Clock::time_point now = Clock::now());

  void set_frame_tamper(FrameTamper tamper) { tamper_ = std::move(tamper); }

  const elgamal::KeyPair& identity() const { return identity_; }
  bool registered() const { return registered_; }
  bool banned() const { return banned_; }
  const std::optional<Point>& relay_key() const { return relay_key_; }
  std::optional<RequestResult> result(std::uint64_t seq) const;

  std::vector<LocalOrder> orders() const;
  const LocalOrder* order(const std::string& local_id) const;
  std::vector<PendingDecision> decisions(Clock::time_point now = Clock::now()) const;
  std::vector<SessionView> sessions() const;
  std::optional<SessionView> session(const std::string& session_id) const;
  const std::vector<Fill>& fills() const { return fills_; }
  std::vector<Event> events_after(std::uint64_t id) const;
  std::uint64_t last_event_id() const { return next_event_ - 1; }
  // Bumped on every state change; lets waiters poll cheaply.
  std::uint64_t revision() const { return revision_; }

 private:
  struct Session {
    SessionView view;
    std::optional<compare::CompareSession> engine;
  };
  enum class RequestKind { kRegister, kOrder, kCancel };
  struct Request {
    RequestKind kind;
    std::string local_order;
    std::optional<RequestResult> result;
  };

  std::uint64_t send(std::string_view type, wire::Json payload,
                     std::optional<std::string> session_id = std::nullopt);
  void send_frame(std::string_view type, const std::string& session_id, Bytes frame);
  void emit(std::string type, wire::Json data);
  void set_status(LocalOrder& o, OrderStatus s, std::string note = {});
  LocalOrder* by_relay_id(const std::string& relay_id);
  LocalOrder& submit(LocalOrder o);
  Session* find(const std::string& session_id);

  void on_register_reply(const wire::Envelope& env);
  void on_order_ack(const wire::Envelope& env);
  void on_ticket(const wire::Envelope& env, Clock::time_point now);
  void on_session_start(const wire::Envelope& env);
  void on_round(const wire::Envelope& env);
  void on_verdict(Session& s, const compare::Verdict& v);
  void on_reveal(const wire::Envelope& env);
  void on_abort(const wire::Envelope& env);
  void on_punish(const wire::Envelope& env);
  void on_settlement(const wire::Envelope& env);
  void on_error(const wire::Envelope& env);
  void finish_order(Session& s, std::uint64_t filled);
  void record_fill(Session& s, std::uint64_t size);

  ClientConfig config_;
  elgamal::KeyPair identity_;
  Rng& rng_;
  Sender send_;
  FrameTamper tamper_;

  std::uint64_t seq_ = 0;
  bool registered_ = false;
  bool banned_ = false;
  std::string display_name_;
  std::optional<Point> relay_key_;
  std::map<std::uint64_t, Request> requests_;
  std::map<std::string, LocalOrder> orders_;
  std::vector<std::string> order_ids_;  // creation order
  std::map<std::string, PendingDecision> pending_;
  std::map<std::string, Clock::time_point> expired_;
  std::map<std::string, Session> sessions_;
  std::vector<Fill> fills_;
  std::deque<Event> events_;
  std::uint64_t next_event_ = 1;
  std::uint64_t revision_ = 0;
  std::uint64_t next_local_ = 1;
};

// JSON shapes served by the local API.
wire::Json to_json(const LocalOrder& o);
wire::Json to_json(const Fill& f);
wire::Json to_json(const PendingDecision& d, Clock::time_point now);
wire::Json to_json(const SessionView& s);

}  // namespace deepocean::client

#endif  // DEEPOCEAN_CLIENT_CORE_H_
