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

#ifndef DEEPOCEAN_RELAY_CORE_H_
#define DEEPOCEAN_RELAY_CORE_H_

// The relay's message handler, independent of any transport.
//
// handle() takes one inbound envelope line and returns the lines to deliver,
// addressed by identity key (or back to the originating connection). tick()
// runs the reapers and retries matching. Every compare frame is verified
// against a per-session PublicTranscript before it is forwarded; a failing
// proof bans its sender.

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "deepocean/compare/transcript.h"
#include "deepocean/price.h"
#include "deepocean/relay/book.h"
#include "deepocean/relay/store.h"
#include "deepocean/wire.h"

namespace deepocean::relay {

using Clock = std::chrono::steady_clock;

struct InstrumentConfig {
  Instrument instrument;
  std::shared_ptr<PriceFeed> price;
};

struct RelayConfig {
  std::vector<InstrumentConfig> instruments;
  unsigned bit_width = 64;
  // Silence allowed within a running comparison, and time allowed for both
  // parties to confirm a ticket.
  std::chrono::milliseconds session_timeout{60'000};
  std::chrono::milliseconds confirm_timeout{60'000};
};

struct Outgoing {
  std::optional<Point> to;  // nullopt: reply on the originating connection
  std::string line;
};

struct Dispatch {
  // Verified, non-banned sender; the transport binds the connection to it.
  std::optional<Point> bind;
  std::vector<Outgoing> out;
};

class RelayCore {
 public:
  RelayCore(RelayConfig config, std::shared_ptr<RelayStore> store, Rng& rng);

  Dispatch handle(std::string_view line, Clock::time_point now = Clock::now());
  std::vector<Outgoing> tick(Clock::time_point now = Clock::now());

  const Point& identity() const { return identity_.pk; }

  // Introspection for operators and tests.
  std::vector<OrderRecord> orders() const;
  std::optional<UserRecord> user(const Point& key) const;
  std::size_t live_sessions() const;
  std::vector<std::string> session_ids() const;

 private:
  struct Session {
    wire::MatchTicket ticket;
    std::array<bool, 2> accepted{};
    bool started = false;
    Clock::time_point created;
    Clock::time_point last_activity;
    std::unique_ptr<compare::PublicTranscript> transcript;
    bool verdict_sent = false;
    std::mutex mu;  // serializes verification of this session's frames
  };
  using SessionPtr = std::shared_ptr<Session>;

  // All private helpers expect mu_ held unless noted.
  std::string seal(std::string_view type, std::optional<std::string> session_id,
                   wire::Json payload);
  Outgoing to(const Point& key, std::string line) const { return {key, std::move(line)}; }
  Outgoing reply(std::string line) const { return {std::nullopt, std::move(line)}; }
  Outgoing error_reply(ErrorCode code, std::string_view message, std::uint64_t ref_seq);

  void on_register(const wire::Envelope& env, Dispatch& d, Clock::time_point now);
  void on_order(const wire::Envelope& env, Dispatch& d, Clock::time_point now);
  void on_cancel(const wire::Envelope& env, Dispatch& d);
  void on_confirm(const wire::Envelope& env, Dispatch& d, Clock::time_point now);
  // Called without mu_; takes the session lock, then mu_.
  void on_frame(const wire::Envelope& env, std::string_view line, Dispatch& d,
                Clock::time_point now);
  void on_abort(const wire::Envelope& env, Dispatch& d, Clock::time_point now);

  void set_state(OrderRecord& order, OrderState state);
  wire::Json order_json(const OrderRecord& o) const;
  void run_matching(std::vector<Outgoing>& out, Clock::time_point now);
  void end_session(const std::string& session_id, std::vector<Outgoing>& out,
                   std::string_view reason);
  void punish(const Point& accused, const std::string& session_id, std::uint32_t round,
              std::string_view reason, std::vector<Outgoing>& out);
  void settle(const SessionPtr& session, const compare::Reveal& reveal,
              std::vector<Outgoing>& out);
  SessionPtr find_session(const std::string& id) const;

  RelayConfig config_;
  std::shared_ptr<RelayStore> store_;
  Rng& rng_;
  elgamal::KeyPair identity_;
  OrderBook book_;
  std::map<std::string, SessionPtr> sessions_;
  std::map<Point, std::uint64_t> last_seq_;
  std::set<std::pair<std::string, std::string>> declined_;  // (buy, sell)
  std::uint64_t seq_ = 0;
  mutable std::mutex mu_;
};

}  // namespace deepocean::relay

#endif  // DEEPOCEAN_RELAY_CORE_H_
