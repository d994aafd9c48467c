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

#include "deepocean/relay/core.h"

#include <chrono>

#include "deepocean/compare/frame.h"

namespace deepocean::relay {

namespace {

constexpr std::size_t kMaxAssetLength = 32;
constexpr std::size_t kMaxNameLength = 64;

std::int64_t wall_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string random_id(Rng& rng, std::size_t n) {
  Bytes b(n);
  rng.fill(b);
  return to_hex(b);
}

bool valid_asset(const std::string& a) {
  if (a.empty() || a.size() > kMaxAssetLength) return false;
  for (char c : a) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') {
      return false;
    }
  }
  return true;
}

}  // namespace

RelayCore::RelayCore(RelayConfig config, std::shared_ptr<RelayStore> store, Rng& rng)
    : config_(std::move(config)), store_(std::move(store)), rng_(rng) {
  if (config_.bit_width < 1 || config_.bit_width > compare::kMaxBitWidth) {
    throw Error(ErrorCode::kInvalidArgument, "bit width must be in [1, 64]");
  }
  if (auto sk = store_->meta("identity_sk")) {
    identity_ = elgamal::KeyPair::from_secret(Scalar::from_bytes(*sk));
  } else {
    identity_ = elgamal::KeyPair::generate(rng_);
    store_->set_meta("identity_sk", identity_.sk.to_bytes());
  }
  // Sessions do not survive a restart; their orders go back on the book.
  store_->reopen_inflight_orders();
  for (auto& o : store_->orders()) book_.insert(std::move(o));
}

std::string RelayCore::seal(std::string_view type, std::optional<std::string> session_id,
                            wire::Json payload) {
  return wire::seal(type, std::move(session_id), ++seq_, std::move(payload), identity_, rng_)
      .to_line();
}

Outgoing RelayCore::error_reply(ErrorCode code, std::string_view message, std::uint64_t ref_seq) {
  return reply(seal(wire::msg::kError, std::nullopt, wire::error_payload(code, message, ref_seq)));
}

wire::Json RelayCore::order_json(const OrderRecord& o) const {
  wire::Json j = {{"order_id", o.order_id},
                  {"owner", wire::hex(o.owner)},
                  {"buy", o.buy_asset},
                  {"sell", o.sell_asset},
                  {"state", std::string(order_state_name(o.state))}};
  if (o.limit_price) j["limit"] = o.limit_price->to_string();
  return j;
}

void RelayCore::set_state(OrderRecord& order, OrderState state) {
  order.state = state;
  store_->set_order_state(order.order_id, state);
}

RelayCore::SessionPtr RelayCore::find_session(const std::string& id) const {
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::vector<OrderRecord> RelayCore::orders() const {
  std::lock_guard lock(mu_);
  std::vector<OrderRecord> out;
  for (const auto* o : book_.all()) out.push_back(*o);
  return out;
}

std::optional<UserRecord> RelayCore::user(const Point& key) const { return store_->user(key); }

std::size_t RelayCore::live_sessions() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

std::vector<std::string> RelayCore::session_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

Dispatch RelayCore::handle(std::string_view line, Clock::time_point now) {
  Dispatch d;
  wire::Envelope env;
  try {
    env = wire::Envelope::from_line(line);
  } catch (const Error& e) {
    std::lock_guard lock(mu_);
    d.out.push_back(error_reply(ErrorCode::kDecode, e.what(), 0));
    return d;
  }
  if (!env.verify()) {
    std::lock_guard lock(mu_);
    d.out.push_back(error_reply(ErrorCode::kBadSignature, "envelope signature rejected", env.seq));
    return d;
  }

  {
    std::lock_guard lock(mu_);
    if (env.type == wire::msg::kRegister) {
      on_register(env, d, now);
      return d;
    }
    const auto user = store_->user(env.sender);
    if (!user) {
      d.out.push_back(error_reply(ErrorCode::kUnknownUser, "register first", env.seq));
      return d;
    }
    if (user->status == UserStatus::kBanned) {
      d.out.push_back(error_reply(ErrorCode::kBannedKey, "identity is banned", env.seq));
      return d;
    }
    d.bind = env.sender;
    auto& last = last_seq_[env.sender];
    if (env.seq <= last) {
      d.out.push_back(error_reply(ErrorCode::kStaleRound, "envelope sequence replayed", env.seq));
      return d;
    }
    last = env.seq;
  }

  try {
    if (env.type == wire::msg::kRound || env.type == wire::msg::kReveal) {
      on_frame(env, line, d, now);
    } else if (env.type == wire::msg::kAbort) {
      on_abort(env, d, now);
    } else {
      std::lock_guard lock(mu_);
      if (env.type == wire::msg::kOrder) {
        on_order(env, d, now);
      } else if (env.type == wire::msg::kCancel) {
        on_cancel(env, d);
      } else if (env.type == wire::msg::kConfirm) {
        on_confirm(env, d, now);
      } else {
        d.out.push_back(error_reply(ErrorCode::kInvalidArgument,
                                    "unexpected message type " + env.type, env.seq));
      }
    }
  } catch (const Error& e) {
    std::lock_guard lock(mu_);
    d.out.push_back(error_reply(e.code(), e.what(), env.seq));
  }
  return d;
}

void RelayCore::on_register(const wire::Envelope& env, Dispatch& d, Clock::time_point) {
  if (const auto existing = store_->user(env.sender)) {
    if (existing->status == UserStatus::kBanned) {
      d.out.push_back(error_reply(ErrorCode::kBannedKey, "identity is banned", env.seq));
      return;
    }
    // A restarted client reattaches with its old identity.
    d.bind = env.sender;
    last_seq_[env.sender] = std::max(last_seq_[env.sender], env.seq);
    d.out.push_back(error_reply(ErrorCode::kDuplicateKey, "identity already registered", env.seq));
    return;
  }
  UserRecord u;
  u.identity_key = env.sender;
  if (auto it = env.payload.find("display_name"); it != env.payload.end() && it->is_string()) {
    u.display_name = it->get<std::string>().substr(0, kMaxNameLength);
  }
  u.registered_at_ms = wall_ms();
  store_->put_user(u);
  d.bind = env.sender;
  last_seq_[env.sender] = env.seq;
  d.out.push_back(reply(seal(wire::msg::kRegister, std::nullopt,
                             {{"identity_key", wire::hex(u.identity_key)},
                              {"display_name", u.display_name},
                              {"status", "active"},
                              {"registered_at_ms", u.registered_at_ms},
                              {"ref_seq", env.seq}})));
}

void RelayCore::on_order(const wire::Envelope& env, Dispatch& d, Clock::time_point now) {
  OrderRecord o;
  o.owner = env.sender;
  o.buy_asset = wire::string_field(env.payload, "buy");
  o.sell_asset = wire::string_field(env.payload, "sell");
  if (!valid_asset(o.buy_asset) || !valid_asset(o.sell_asset)) {
    throw Error(ErrorCode::kInvalidArgument, "bad asset code");
  }
  if (o.buy_asset == o.sell_asset) {
    throw Error(ErrorCode::kSameAssetPair, "buy and sell assets are the same");
  }
  if (auto it = env.payload.find("limit"); it != env.payload.end() && !it->is_null()) {
    if (!it->is_string()) throw Error(ErrorCode::kInvalidArgument, "limit must be a string");
    o.limit_price = Decimal::parse(it->get<std::string>());
    if (!o.limit_price->positive()) throw Error(ErrorCode::kInvalidArgument, "limit must be > 0");
  }
  o.order_id = random_id(rng_, 8);
  o.created_at_ms = wall_ms();
  o.sequence = store_->put_order(o);
  book_.insert(o);
  wire::Json ack = {{"order", order_json(o)}, {"ref_seq", env.seq}};
  d.out.push_back(reply(seal(wire::msg::kOrderAck, std::nullopt, std::move(ack))));
  run_matching(d.out, now);
}

void RelayCore::on_cancel(const wire::Envelope& env, Dispatch& d) {
  const std::string id = wire::string_field(env.payload, "order_id");
  OrderRecord* o = book_.find(id);
  if (!o || o->owner != env.sender) throw Error(ErrorCode::kUnknownOrder, "no such order");
  if (o->state == OrderState::kMatched || o->state == OrderState::kComparing) {
    throw Error(ErrorCode::kProtocolOrderViolation, "order is in a session");
  }
  if (o->state == OrderState::kOpen) set_state(*o, OrderState::kCancelled);
  d.out.push_back(reply(seal(wire::msg::kOrderAck, std::nullopt,
                             {{"order", order_json(*o)}, {"ref_seq", env.seq}})));
}

void RelayCore::on_confirm(const wire::Envelope& env, Dispatch& d, Clock::time_point now) {
  if (!env.session_id) throw Error(ErrorCode::kUnknownSession, "confirm without session");
  const SessionPtr s = find_session(*env.session_id);
  if (!s) throw Error(ErrorCode::kUnknownSession, "no such session");
  const int role = s->ticket.role_of(env.sender);
  if (role == 0) throw Error(ErrorCode::kNotYourSession, "not a party to this session");
  if (s->started || s->accepted[role - 1]) {
    throw Error(ErrorCode::kStaleRound, "already confirmed");
  }
  const auto it = env.payload.find("accept");
  if (it == env.payload.end() || !it->is_boolean()) {
    throw Error(ErrorCode::kDecode, "confirm needs a boolean 'accept'");
  }
  if (!it->get<bool>()) {
    declined_.insert({s->ticket.order1, s->ticket.order2});
    end_session(*env.session_id, d.out, "declined");
    run_matching(d.out, now);
    return;
  }
  s->accepted[role - 1] = true;
  if (!(s->accepted[0] && s->accepted[1])) return;

  compare::CompareConfig cfg;
  cfg.bit_width = s->ticket.bit_width;
  cfg.session_id = from_hex(s->ticket.session_id);
  cfg.identity_keys = {s->ticket.role1, s->ticket.role2};
  cfg.timeout = config_.session_timeout;
  s->transcript = std::make_unique<compare::PublicTranscript>(cfg);
  s->started = true;
  s->last_activity = now;
  for (const std::string* id : {&s->ticket.order1, &s->ticket.order2}) {
    if (OrderRecord* o = book_.find(*id)) set_state(*o, OrderState::kComparing);
  }
  const std::string line =
      seal(wire::msg::kSessionStart, s->ticket.session_id, {{"ticket", s->ticket.to_json()}});
  d.out.push_back(to(s->ticket.role1, line));
  d.out.push_back(to(s->ticket.role2, line));
}

void RelayCore::on_frame(const wire::Envelope& env, std::string_view line, Dispatch& d,
                         Clock::time_point now) {
  SessionPtr s;
  int role = 0;
  {
    std::lock_guard lock(mu_);
    if (!env.session_id || !(s = find_session(*env.session_id))) {
      throw Error(ErrorCode::kUnknownSession, "no such session");
    }
    role = s->ticket.role_of(env.sender);
    if (role == 0) throw Error(ErrorCode::kNotYourSession, "not a party to this session");
    if (!s->started) throw Error(ErrorCode::kProtocolOrderViolation, "session not started");
  }
  const Bytes raw = wire::bytes_field(env.payload, "frame");
  const bool reveal_envelope = env.type == wire::msg::kReveal;

  std::optional<std::pair<std::uint32_t, std::string>> misbehavior;
  std::optional<compare::Verdict> new_verdict;
  std::optional<compare::Reveal> reveal;
  {
    std::lock_guard session_lock(s->mu);
    const compare::Frame f = compare::decode_frame(raw);
    if (f.role != role) {
      throw Error(ErrorCode::kProtocolOrderViolation, "frame role does not match sender");
    }
    if ((f.round == compare::Round::kReveal) != reveal_envelope) {
      throw Error(ErrorCode::kProtocolOrderViolation, "reveal frames travel as REVEAL");
    }
    try {
      s->transcript->accept(raw);
      if (s->transcript->verdict() && !s->verdict_sent) {
        s->verdict_sent = true;
        new_verdict = s->transcript->verdict();
      }
      if (reveal_envelope) reveal = s->transcript->reveal();
    } catch (const BadProofError& e) {
      misbehavior.emplace(e.round(), e.what());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBadReveal) throw;
      misbehavior.emplace(static_cast<std::uint32_t>(compare::Round::kReveal), e.what());
    }
  }

  std::lock_guard lock(mu_);
  if (find_session(*env.session_id) != s) return;  // ended meanwhile
  if (misbehavior) {
    punish(env.sender, *env.session_id, misbehavior->first, misbehavior->second, d.out);
    run_matching(d.out, now);
    return;
  }
  s->last_activity = now;
  const Point& peer = role == 1 ? s->ticket.role2 : s->ticket.role1;
  d.out.push_back(to(peer, std::string(line)));
  if (new_verdict) {
    const std::string v = seal(wire::msg::kVerdict, *env.session_id,
                               {{"smaller_role", new_verdict->smaller_role},
                                {"is_strict", new_verdict->is_strict}});
    d.out.push_back(to(s->ticket.role1, v));
    d.out.push_back(to(s->ticket.role2, v));
  }
  if (reveal) {
    settle(s, *reveal, d.out);
    run_matching(d.out, now);
  }
}

void RelayCore::on_abort(const wire::Envelope& env, Dispatch& d, Clock::time_point now) {
  SessionPtr s;
  {
    std::lock_guard lock(mu_);
    if (!env.session_id || !(s = find_session(*env.session_id))) {
      throw Error(ErrorCode::kUnknownSession, "no such session");
    }
    if (s->ticket.role_of(env.sender) == 0) {
      throw Error(ErrorCode::kNotYourSession, "not a party to this session");
    }
  }
  const auto report = env.payload.find("report");
  if (report == env.payload.end()) {
    std::lock_guard lock(mu_);
    if (find_session(*env.session_id) != s) return;
    if (!s->started) {
      // Before both confirmations an abort is a decline.
      declined_.insert({s->ticket.order1, s->ticket.order2});
      end_session(*env.session_id, d.out, "declined");
    } else {
      punish(env.sender, *env.session_id, 0, "abandoned a confirmed session", d.out);
    }
    run_matching(d.out, now);
    return;
  }

  // Complaint path: the evidence must be a frame signed by the accused whose
  // proof fails against this session's transcript.
  const auto invalid = [&](std::string_view why) {
    std::lock_guard lock(mu_);
    d.out.push_back(error_reply(ErrorCode::kInvalidEvidence, why, env.seq));
  };
  Point accused;
  Bytes evidence;
  try {
    accused = wire::point_field(*report, "accused");
    evidence = wire::bytes_field(*report, "evidence");
  } catch (const Error&) {
    return invalid("malformed report");
  }
  const int accused_role = s->ticket.role_of(accused);
  if (accused_role == 0 || accused == env.sender) return invalid("accused is not the peer");
  std::optional<std::pair<std::uint32_t, std::string>> proven;
  {
    std::lock_guard session_lock(s->mu);
    if (!s->started) return invalid("session not started");
    try {
      const compare::Frame f = compare::decode_frame(evidence);
      if (f.role != accused_role || !compare::verify_frame_signature(f, accused)) {
        return invalid("evidence not signed by the accused");
      }
      s->transcript->check(evidence);
    } catch (const BadProofError& e) {
      proven.emplace(e.round(), e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kBadReveal) {
        proven.emplace(static_cast<std::uint32_t>(compare::Round::kReveal), e.what());
      }
    }
  }
  if (!proven) return invalid("evidence does not demonstrate a failing proof");
  std::lock_guard lock(mu_);
  if (find_session(*env.session_id) != s) return;
  punish(accused, *env.session_id, proven->first, proven->second, d.out);
  run_matching(d.out, now);
}

void RelayCore::run_matching(std::vector<Outgoing>& out, Clock::time_point now) {
  for (const auto& ic : config_.instruments) {
    Decimal price;
    try {
      price = ic.price->price();
    } catch (const Error&) {
      continue;  // stale price pauses matching for this instrument
    }
    const auto pairs = book_.match(ic.instrument, price, [this](const auto& b, const auto& s) {
      return !declined_.contains({b.order_id, s.order_id});
    });
    for (const auto& p : pairs) {
      OrderRecord* buy = book_.find(p.buy_order);
      OrderRecord* sell = book_.find(p.sell_order);
      set_state(*buy, OrderState::kMatched);
      set_state(*sell, OrderState::kMatched);
      auto s = std::make_shared<Session>();
      s->ticket.session_id = random_id(rng_, 16);
      s->ticket.base = ic.instrument.base;
      s->ticket.quote = ic.instrument.quote;
      s->ticket.market_price = price;
      s->ticket.role1 = buy->owner;
      s->ticket.role2 = sell->owner;
      s->ticket.order1 = buy->order_id;
      s->ticket.order2 = sell->order_id;
      s->ticket.bit_width = config_.bit_width;
      s->ticket.issued_at_ms = wall_ms();
      s->ticket.sign(identity_.sk, rng_);
      s->created = now;
      s->last_activity = now;
      const std::string line =
          seal(wire::msg::kMatchTicket, s->ticket.session_id, {{"ticket", s->ticket.to_json()}});
      out.push_back(to(buy->owner, line));
      out.push_back(to(sell->owner, line));
      sessions_.emplace(s->ticket.session_id, std::move(s));
    }
  }
}

void RelayCore::end_session(const std::string& id, std::vector<Outgoing>& out,
                            std::string_view reason) {
  const SessionPtr s = find_session(id);
  if (!s) return;
  for (const std::string* oid : {&s->ticket.order1, &s->ticket.order2}) {
    OrderRecord* o = book_.find(*oid);
    if (o && (o->state == OrderState::kMatched || o->state == OrderState::kComparing)) {
      set_state(*o, OrderState::kOpen);
    }
  }
  const std::string line = seal(wire::msg::kAbort, id, {{"reason", std::string(reason)}});
  out.push_back(to(s->ticket.role1, line));
  out.push_back(to(s->ticket.role2, line));
  sessions_.erase(id);
}

void RelayCore::punish(const Point& accused, const std::string& session_id, std::uint32_t round,
                       std::string_view reason, std::vector<Outgoing>& out) {
  store_->set_user_status(accused, UserStatus::kBanned);
  for (const auto* c : book_.all()) {
    OrderRecord* o = book_.find(c->order_id);
    if (o->owner == accused &&
        (o->state == OrderState::kOpen || o->state == OrderState::kMatched ||
         o->state == OrderState::kComparing)) {
      set_state(*o, OrderState::kCancelled);
    }
  }
  // Every session the accused is part of ends; counterparties go back to open.
  std::vector<std::string> ended;
  for (const auto& [id, s] : sessions_) {
    if (s->ticket.role_of(accused) != 0) ended.push_back(id);
  }
  for (const auto& id : ended) {
    const SessionPtr s = sessions_.at(id);
    for (const std::string* oid : {&s->ticket.order1, &s->ticket.order2}) {
      OrderRecord* o = book_.find(*oid);
      if (o && o->owner != accused &&
          (o->state == OrderState::kMatched || o->state == OrderState::kComparing)) {
        set_state(*o, OrderState::kOpen);
      }
    }
    const std::string line =
        seal(wire::msg::kPunishNotice, id,
             {{"accused", wire::hex(accused)},
              {"round", id == session_id ? round : 0},
              {"reason", id == session_id ? std::string(reason) : "counterparty banned"}});
    out.push_back(to(s->ticket.role1, line));
    out.push_back(to(s->ticket.role2, line));
    sessions_.erase(id);
  }
}

void RelayCore::settle(const SessionPtr& s, const compare::Reveal& reveal,
                       std::vector<Outgoing>& out) {
  const int smaller = s->transcript->verdict()->smaller_role;
  OrderRecord* small_order = book_.find(s->ticket.order_of(smaller));
  OrderRecord* large_order = book_.find(s->ticket.order_of(smaller == 1 ? 2 : 1));
  if (small_order) {
    set_state(*small_order, OrderState::kRevealed);
    set_state(*small_order, OrderState::kSettled);
  }
  // The larger order keeps its id and goes back on the book; its owner alone
  // knows the residual and cancels it if nothing is left.
  if (large_order) set_state(*large_order, OrderState::kOpen);

  SettlementRecord rec;
  rec.session_id = s->ticket.session_id;
  rec.base = s->ticket.base;
  rec.quote = s->ticket.quote;
  rec.price = s->ticket.market_price;
  rec.size = reveal.size;
  rec.buyer = s->ticket.role1;
  rec.seller = s->ticket.role2;
  rec.buy_order = s->ticket.order1;
  rec.sell_order = s->ticket.order2;
  rec.settled_at_ms = wall_ms();
  store_->add_settlement(rec);

  const std::string line = seal(wire::msg::kSettlement, rec.session_id,
                                {{"base", rec.base},
                                 {"quote", rec.quote},
                                 {"price", rec.price.to_string()},
                                 {"size", rec.size},
                                 {"buyer", wire::hex(rec.buyer)},
                                 {"seller", wire::hex(rec.seller)},
                                 {"buy_order", rec.buy_order},
                                 {"sell_order", rec.sell_order},
                                 {"smaller_role", smaller}});
  out.push_back(to(s->ticket.role1, line));
  out.push_back(to(s->ticket.role2, line));
  sessions_.erase(rec.session_id);
}

std::vector<Outgoing> RelayCore::tick(Clock::time_point now) {
  std::lock_guard lock(mu_);
  std::vector<Outgoing> out;
  std::vector<std::string> ids;
  for (const auto& [id, s] : sessions_) ids.push_back(id);
  for (const auto& id : ids) {
    const SessionPtr s = find_session(id);
    if (!s) continue;
    if (!s->started) {
      if (now - s->created > config_.confirm_timeout) {
        declined_.insert({s->ticket.order1, s->ticket.order2});
        end_session(id, out, "confirmation expired");
      }
      continue;
    }
    if (now - s->last_activity <= config_.session_timeout) continue;
    std::unique_lock session_lock(s->mu, std::try_to_lock);
    if (!session_lock.owns_lock()) continue;  // a frame is being verified right now
    const auto owing = s->transcript->roles_owing();
    if (owing.size() == 1) {
      const int r = owing.front();
      const auto round = s->transcript->next_round(r);
      const Point accused = r == 1 ? s->ticket.role1 : s->ticket.role2;
      session_lock.unlock();
      punish(accused, id, round ? static_cast<std::uint32_t>(*round) : 0, "timed out", out);
    } else {
      session_lock.unlock();
      end_session(id, out, "session timed out");
    }
  }
  run_matching(out, now);
  return out;
}

}  // namespace deepocean::relay
