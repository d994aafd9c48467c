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

#include "deepocean/client/core.h"

#include <algorithm>

#include "deepocean/compare/frame.h"

namespace deepocean::client {

namespace {

constexpr std::size_t kMaxEvents = 1000;

std::int64_t wall_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::int64_t wall_in(Clock::duration d) {
  return wall_ms() + std::chrono::duration_cast<std::chrono::milliseconds>(d).count();
}

}  // namespace

std::string_view order_status_name(OrderStatus s) {
  switch (s) {
    case OrderStatus::kSubmitting: return "submitting";
    case OrderStatus::kOpen: return "open";
    case OrderStatus::kMatched: return "matched";
    case OrderStatus::kComparing: return "comparing";
    case OrderStatus::kFilled: return "filled";
    case OrderStatus::kHeld: return "held";
    case OrderStatus::kCancelled: return "cancelled";
    case OrderStatus::kRejected: return "rejected";
  }
  return "unknown";
}

std::string_view price_check_name(PriceCheck c) {
  switch (c) {
    case PriceCheck::kPass: return "pass";
    case PriceCheck::kFail: return "fail";
    case PriceCheck::kUnavailable: return "unavailable";
  }
  return "unknown";
}

FrameTamper corrupt_bit_proofs() {
  return [](const Bytes& raw, const Scalar& sk, Rng& rng) -> Bytes {
    compare::Frame f = compare::decode_frame(raw);
    if (f.round != compare::Round::kBits) return raw;
    auto body = std::get<compare::BitsBody>(f.body);
    if (body.proofs.size() < 2) return raw;
    std::swap(body.proofs[0], body.proofs[1]);
    return compare::encode_frame(f.session_id, f.round, f.role, body, sk, rng);
  };
}

ClientCore::ClientCore(ClientConfig config, elgamal::KeyPair identity, Rng& rng, Sender send)
    : config_(std::move(config)), identity_(std::move(identity)), rng_(rng), send_(std::move(send)) {
  if (!config_.tolerance.positive() || config_.tolerance >= Decimal::parse("0.5")) {
    throw Error(ErrorCode::kInvalidArgument, "price tolerance must be in (0, 0.5)");
  }
  display_name_ = config_.display_name;
}

std::uint64_t ClientCore::send(std::string_view type, wire::Json payload,
                               std::optional<std::string> session_id) {
  const std::uint64_t seq = ++seq_;
  send_(wire::seal(type, std::move(session_id), seq, std::move(payload), identity_, rng_).to_line());
  return seq;
}

void ClientCore::send_frame(std::string_view type, const std::string& session_id, Bytes frame) {
  if (tamper_) frame = tamper_(frame, identity_.sk, rng_);
  send(type, {{"frame", to_hex(frame)}}, session_id);
}

void ClientCore::emit(std::string type, wire::Json data) {
  events_.push_back({next_event_++, std::move(type), std::move(data)});
  if (events_.size() > kMaxEvents) events_.pop_front();
  ++revision_;
}

void ClientCore::set_status(LocalOrder& o, OrderStatus s, std::string note) {
  o.status = s;
  o.timeline.push_back({wall_ms(), s, note});
  emit("order", to_json(o));
}

LocalOrder* ClientCore::by_relay_id(const std::string& relay_id) {
  for (auto& [id, o] : orders_) {
    if (o.relay_id == relay_id) return &o;
  }
  return nullptr;
}

ClientCore::Session* ClientCore::find(const std::string& session_id) {
  auto it = sessions_.find(session_id);
  return it == sessions_.end() ? nullptr : &it->second;
}

std::optional<RequestResult> ClientCore::result(std::uint64_t seq) const {
  auto it = requests_.find(seq);
  if (it == requests_.end()) return std::nullopt;
  return it->second.result;
}

std::uint64_t ClientCore::register_user(const std::string& display_name) {
  if (!display_name.empty()) display_name_ = display_name;
  const std::uint64_t seq = send(wire::msg::kRegister, {{"display_name", display_name_}});
  requests_[seq] = {RequestKind::kRegister, {}, std::nullopt};
  return seq;
}

void ClientCore::on_connected() {
  if (registered_) register_user({});
}

LocalOrder& ClientCore::submit(LocalOrder o) {
  wire::Json payload = {{"buy", o.buy}, {"sell", o.sell}};
  if (o.limit) payload["limit"] = o.limit->to_string();
  const std::string id = o.local_id;
  auto& stored = orders_[id] = std::move(o);
  order_ids_.push_back(id);
  set_status(stored, OrderStatus::kSubmitting);
  const std::uint64_t seq = send(wire::msg::kOrder, std::move(payload));
  requests_[seq] = {RequestKind::kOrder, id, std::nullopt};
  return stored;
}

const LocalOrder& ClientCore::place_order(const std::string& buy, const std::string& sell,
                                          std::uint64_t size, std::optional<Decimal> limit) {
  if (size == 0) throw Error(ErrorCode::kSizeOutOfRange, "size must be positive");
  if (!registered_) throw Error(ErrorCode::kNotRegistered, "register with the relay first");
  if (banned_) throw Error(ErrorCode::kBannedKey, "this key is banned");
  if (buy == sell) throw Error(ErrorCode::kSameAssetPair, "buy and sell assets are the same");
  LocalOrder o;
  o.local_id = "L" + std::to_string(next_local_++);
  o.buy = buy;
  o.sell = sell;
  o.limit = limit;
  o.size = size;
  o.residual = size;
  return submit(std::move(o));
}

void ClientCore::cancel_order(const std::string& local_id) {
  auto it = orders_.find(local_id);
  if (it == orders_.end()) throw Error(ErrorCode::kUnknownOrder, "no such order");
  LocalOrder& o = it->second;
  if (o.status == OrderStatus::kHeld) {
    set_status(o, OrderStatus::kCancelled, "residual abandoned");
    return;
  }
  if (o.status != OrderStatus::kOpen) {
    throw Error(ErrorCode::kProtocolOrderViolation, "only open orders can be cancelled");
  }
  const std::uint64_t seq = send(wire::msg::kCancel, {{"order_id", o.relay_id}});
  requests_[seq] = {RequestKind::kCancel, local_id, std::nullopt};
}

const LocalOrder& ClientCore::resubmit(const std::string& local_id) {
  auto it = orders_.find(local_id);
  if (it == orders_.end()) throw Error(ErrorCode::kUnknownOrder, "no such order");
  LocalOrder& held = it->second;
  if (held.status != OrderStatus::kHeld || held.residual == 0) {
    throw Error(ErrorCode::kProtocolOrderViolation, "nothing held to resubmit");
  }
  LocalOrder fresh;
  fresh.local_id = "L" + std::to_string(next_local_++);
  fresh.buy = held.buy;
  fresh.sell = held.sell;
  fresh.limit = held.limit;
  fresh.size = held.residual;
  fresh.residual = held.residual;
  set_status(held, OrderStatus::kCancelled, "residual resubmitted as " + fresh.local_id);
  return submit(std::move(fresh));
}

PriceVerdict ClientCore::check_price(const wire::MatchTicket& ticket) const {
  PriceVerdict v;
  v.quoted = ticket.market_price;
  if (!config_.reference) return v;
  try {
    v.reference = config_.reference->price();
  } catch (const Error&) {
    return v;
  }
  v.result = within_tolerance(v.quoted, *v.reference, config_.tolerance) ? PriceCheck::kPass
                                                                          : PriceCheck::kFail;
  return v;
}

void ClientCore::decide(const std::string& session_id, bool accept, Clock::time_point now) {
  auto it = pending_.find(session_id);
  if (it == pending_.end()) {
    if (expired_.contains(session_id)) {
      throw Error(ErrorCode::kDecisionExpired, "the decision window has closed");
    }
    throw Error(ErrorCode::kUnknownSession, "no pending decision for this session");
  }
  if (now >= it->second.expires_at) {
    expired_[session_id] = now;
    pending_.erase(it);
    tick(now);
    throw Error(ErrorCode::kDecisionExpired, "the decision window has closed");
  }
  const PendingDecision d = std::move(it->second);
  pending_.erase(it);
  send(wire::msg::kConfirm, {{"accept", accept}}, session_id);
  Session* s = find(session_id);
  if (s) {
    s->view.state = accept ? "confirmed" : "aborted";
    if (!accept) s->view.reason = "declined";
  }
  if (auto* o = by_relay_id(d.ticket.order_of(d.ticket.role_of(identity_.pk)))) {
    if (!accept) set_status(*o, OrderStatus::kOpen, "declined match " + session_id);
  }
  emit("decided", {{"session_id", session_id}, {"accept", accept}});
}

void ClientCore::tick(Clock::time_point now) {
  for (auto it = pending_.begin(); it != pending_.end();) {
    if (now < it->second.expires_at) {
      ++it;
      continue;
    }
    // No CONFIRM is sent on expiry; the relay's own timeout releases the pair.
    expired_[it->first] = now;
    if (Session* s = find(it->first)) {
      s->view.state = "aborted";
      s->view.reason = "decision expired";
    }
    emit("decision_expired", {{"session_id", it->first}});
    it = pending_.erase(it);
  }
  std::erase_if(expired_, [&](const auto& e) { return now - e.second > std::chrono::minutes(10); });
}

void ClientCore::on_line(std::string_view line, Clock::time_point now) {
  wire::Envelope env;
  try {
    env = wire::Envelope::from_line(line);
  } catch (const Error& e) {
    emit("error", {{"code", "Decode"}, {"message", e.what()}});
    return;
  }
  const bool relay_message = env.type != wire::msg::kRound && env.type != wire::msg::kReveal;
  if (!env.verify()) {
    emit("error", {{"code", "BadSignature"}, {"message", "dropped an unverifiable relay line"}});
    return;
  }
  if (relay_message) {
    if (!relay_key_) relay_key_ = env.sender;
    if (env.sender != *relay_key_) {
      emit("error", {{"code", "BadSignature"}, {"message", "line not signed by the relay"}});
      return;
    }
  }
  try {
    if (env.type == wire::msg::kRegister) on_register_reply(env);
    else if (env.type == wire::msg::kOrderAck) on_order_ack(env);
    else if (env.type == wire::msg::kMatchTicket) on_ticket(env, now);
    else if (env.type == wire::msg::kSessionStart) on_session_start(env);
    else if (env.type == wire::msg::kRound) on_round(env);
    else if (env.type == wire::msg::kReveal) on_reveal(env);
    else if (env.type == wire::msg::kVerdict) {
      if (Session* s = find(env.session_id.value_or(""))) {
        emit("relay_verdict", {{"session_id", s->view.session_id}, {"payload", env.payload}});
      }
    } else if (env.type == wire::msg::kAbort) on_abort(env);
    else if (env.type == wire::msg::kPunishNotice) on_punish(env);
    else if (env.type == wire::msg::kSettlement) on_settlement(env);
    else if (env.type == wire::msg::kError) on_error(env);
  } catch (const Error& e) {
    emit("error", {{"code", std::string(error_code_name(e.code()))},
                   {"message", e.what()},
                   {"type", env.type}});
  } catch (const std::exception& e) {
    emit("error", {{"code", "Decode"}, {"message", e.what()}, {"type", env.type}});
  }
}

void ClientCore::on_register_reply(const wire::Envelope& env) {
  registered_ = true;
  const auto ref = env.payload.value("ref_seq", std::uint64_t{0});
  if (auto it = requests_.find(ref); it != requests_.end()) it->second.result = {true, {}, {}};
  emit("registered", {{"identity_key", wire::hex(identity_.pk)},
                      {"display_name", env.payload.value("display_name", "")}});
}

void ClientCore::on_order_ack(const wire::Envelope& env) {
  const auto ref = env.payload.value("ref_seq", std::uint64_t{0});
  auto req = requests_.find(ref);
  if (req == requests_.end()) return;
  req->second.result = {true, {}, {}};
  auto it = orders_.find(req->second.local_order);
  if (it == orders_.end()) return;
  LocalOrder& o = it->second;
  const wire::Json& order = env.payload.at("order");
  if (req->second.kind == RequestKind::kOrder) {
    o.relay_id = order.at("order_id").get<std::string>();
    set_status(o, OrderStatus::kOpen, "accepted as " + o.relay_id);
  } else if (order.value("state", "") == "cancelled" && o.status != OrderStatus::kHeld) {
    set_status(o, o.residual == 0 ? OrderStatus::kFilled : OrderStatus::kCancelled,
               o.residual == 0 ? "complete" : "cancelled");
  }
}

void ClientCore::on_ticket(const wire::Envelope& env, Clock::time_point now) {
  const auto ticket = wire::MatchTicket::from_json(env.payload.at("ticket"));
  if (!ticket.verify(*relay_key_)) throw Error(ErrorCode::kBadSignature, "ticket signature");
  const int role = ticket.role_of(identity_.pk);
  if (role == 0) throw Error(ErrorCode::kNotYourSession, "ticket for someone else");
  LocalOrder* o = by_relay_id(ticket.order_of(role));
  const bool usable = o && o->status == OrderStatus::kOpen && o->residual > 0 &&
                      compare::size_in_range(o->residual, ticket.bit_width);
  if (!usable) {
    send(wire::msg::kConfirm, {{"accept", false}}, ticket.session_id);
    emit("declined", {{"session_id", ticket.session_id}, {"reason", "no matching open order"}});
    return;
  }
  set_status(*o, OrderStatus::kMatched, "match " + ticket.session_id);
  Session s;
  s.view.session_id = ticket.session_id;
  s.view.local_order = o->local_id;
  s.view.role = role;
  s.view.state = "awaiting_decision";
  s.view.ticket = ticket;
  sessions_[ticket.session_id] = std::move(s);

  PendingDecision d;
  d.session_id = ticket.session_id;
  d.local_order = o->local_id;
  d.ticket = ticket;
  d.price = check_price(ticket);
  d.expires_at = now + config_.decision_ttl;
  d.expires_at_ms = wall_in(config_.decision_ttl);
  pending_[d.session_id] = d;
  emit("decision", to_json(d, now));
  if (config_.auto_confirm && d.price.result == PriceCheck::kPass) decide(d.session_id, true, now);
}

void ClientCore::on_session_start(const wire::Envelope& env) {
  const auto ticket = wire::MatchTicket::from_json(env.payload.at("ticket"));
  if (!ticket.verify(*relay_key_)) throw Error(ErrorCode::kBadSignature, "ticket signature");
  Session* s = find(ticket.session_id);
  if (!s || s->view.state != "confirmed") {
    throw Error(ErrorCode::kUnknownSession, "session start for an unconfirmed match");
  }
  auto oit = orders_.find(s->view.local_order);
  if (oit == orders_.end()) throw Error(ErrorCode::kUnknownOrder, "order vanished");
  LocalOrder& o = oit->second;
  compare::CompareConfig cfg;
  cfg.bit_width = ticket.bit_width;
  cfg.role = s->view.role;
  cfg.session_id = from_hex(ticket.session_id);
  cfg.identity_keys = {ticket.role1, ticket.role2};
  auto [engine, keys] = compare::CompareSession::start(cfg, identity_.sk, o.residual, rng_);
  s->engine.emplace(std::move(engine));
  s->view.state = "comparing";
  s->view.progress = s->engine->transcript().progress();
  set_status(o, OrderStatus::kComparing, "comparing in " + ticket.session_id);
  send_frame(wire::msg::kRound, ticket.session_id, std::move(keys));
}

void ClientCore::on_round(const wire::Envelope& env) {
  Session* s = find(env.session_id.value_or(""));
  if (!s || !s->engine) throw Error(ErrorCode::kUnknownSession, "round for an unknown session");
  const Bytes frame = wire::bytes_field(env.payload, "frame");
  compare::StepResult r;
  try {
    r = s->engine->handle_message(frame, rng_);
  } catch (const BadProofError& e) {
    // The relay should have caught this; hand it the evidence.
    const Point peer = s->view.role == 1 ? s->view.ticket.role2 : s->view.ticket.role1;
    send(wire::msg::kAbort,
         {{"report", {{"accused", wire::hex(peer)}, {"evidence", to_hex(e.evidence())}}}},
         s->view.session_id);
    s->view.state = "aborted";
    s->view.reason = e.what();
    emit("session", to_json(s->view));
    return;
  }
  for (auto& out : r.outbound) send_frame(wire::msg::kRound, s->view.session_id, std::move(out));
  s->view.progress = s->engine->transcript().progress();
  if (r.verdict) on_verdict(*s, *r.verdict);
  else emit("session", to_json(s->view));
}

void ClientCore::on_verdict(Session& s, const compare::Verdict& v) {
  s.view.verdict = v;
  s.view.state = "verdict";
  emit("session", to_json(s.view));
  if (!s.engine->is_revealer()) return;  // wait for the peer's reveal
  const std::uint64_t size = orders_.at(s.view.local_order).residual;
  send_frame(wire::msg::kReveal, s.view.session_id, s.engine->make_reveal_frame(rng_));
  s.view.progress = s.engine->transcript().progress();
  record_fill(s, size);
}

void ClientCore::on_reveal(const wire::Envelope& env) {
  Session* s = find(env.session_id.value_or(""));
  if (!s || !s->engine) throw Error(ErrorCode::kUnknownSession, "reveal for an unknown session");
  const compare::Reveal r = s->engine->accept_reveal(wire::bytes_field(env.payload, "frame"));
  s->view.progress = s->engine->transcript().progress();
  record_fill(*s, r.size);
}

void ClientCore::record_fill(Session& s, std::uint64_t size) {
  LocalOrder& o = orders_.at(s.view.local_order);
  const auto& t = s.view.ticket;
  Fill f;
  f.session_id = s.view.session_id;
  f.local_order = o.local_id;
  f.relay_order = o.relay_id;
  f.base = t.base;
  f.quote = t.quote;
  f.price = t.market_price;
  f.size = size;
  f.bought = s.view.role == 1;
  f.at_ms = wall_ms();
  fills_.push_back(f);
  o.residual -= size;
  s.view.fill_size = size;
  s.view.state = "filled";
  emit("fill", to_json(f));
  emit("session", to_json(s.view));

  if (o.residual == 0) {
    if (s.engine->is_revealer()) {
      set_status(o, OrderStatus::kFilled, "complete");
    } else {
      // Equal sizes: the relay reopened our order with nothing left in it.
      set_status(o, OrderStatus::kOpen, "filled " + std::to_string(size) + ", closing");
      const std::uint64_t seq = send(wire::msg::kCancel, {{"order_id", o.relay_id}});
      requests_[seq] = {RequestKind::kCancel, o.local_id, std::nullopt};
    }
  } else if (config_.auto_resubmit) {
    set_status(o, OrderStatus::kOpen,
               "filled " + std::to_string(size) + ", residual " + std::to_string(o.residual) +
                   " back on the book");
  } else {
    const std::uint64_t seq = send(wire::msg::kCancel, {{"order_id", o.relay_id}});
    requests_[seq] = {RequestKind::kCancel, o.local_id, std::nullopt};
    set_status(o, OrderStatus::kHeld,
               "filled " + std::to_string(size) + ", residual " + std::to_string(o.residual) +
                   " held");
  }
}

void ClientCore::on_abort(const wire::Envelope& env) {
  const std::string sid = env.session_id.value_or("");
  Session* s = find(sid);
  pending_.erase(sid);
  if (!s) return;
  const std::string reason = env.payload.value("reason", "aborted");
  if (s->view.state != "filled" && s->view.state != "settled") {
    s->view.state = "aborted";
    s->view.reason = reason;
    LocalOrder& o = orders_.at(s->view.local_order);
    if (o.status == OrderStatus::kMatched || o.status == OrderStatus::kComparing) {
      set_status(o, OrderStatus::kOpen, "session aborted: " + reason);
    }
  }
  emit("session", to_json(s->view));
}

void ClientCore::on_punish(const wire::Envelope& env) {
  const Point accused = wire::point_field(env.payload, "accused");
  const std::string sid = env.session_id.value_or("");
  Session* s = find(sid);
  pending_.erase(sid);
  if (accused == identity_.pk) {
    banned_ = true;
    for (auto& [id, o] : orders_) {
      if (o.status != OrderStatus::kFilled && o.status != OrderStatus::kCancelled &&
          o.status != OrderStatus::kRejected) {
        set_status(o, OrderStatus::kCancelled, "key banned");
      }
    }
  }
  if (s) {
    s->view.state = "punished";
    s->view.reason = env.payload.value("reason", "");
    if (accused != identity_.pk) {
      LocalOrder& o = orders_.at(s->view.local_order);
      if (o.status == OrderStatus::kMatched || o.status == OrderStatus::kComparing) {
        set_status(o, OrderStatus::kOpen, "counterparty punished");
      }
    }
  }
  emit("punished", {{"session_id", sid},
                    {"accused", wire::hex(accused)},
                    {"self", accused == identity_.pk},
                    {"code", std::string(error_code_name(ErrorCode::kPeerPunished))},
                    {"reason", env.payload.value("reason", "")}});
}

void ClientCore::on_settlement(const wire::Envelope& env) {
  Session* s = find(env.session_id.value_or(""));
  if (!s) return;
  s->view.state = "settled";
  emit("settlement", {{"session_id", s->view.session_id}, {"instruction", env.payload}});
  emit("session", to_json(s->view));
}

void ClientCore::on_error(const wire::Envelope& env) {
  const std::string code = env.payload.value("code", "");
  const std::string message = env.payload.value("message", "");
  if (code == "BannedKey") banned_ = true;
  const auto ref = env.payload.value("ref_seq", std::uint64_t{0});
  if (auto req = requests_.find(ref); req != requests_.end()) {
    if (req->second.kind == RequestKind::kRegister && code == "DuplicateKey") {
      // Already known to the relay; the connection is bound all the same.
      registered_ = true;
      req->second.result = {true, code, message};
    } else {
      req->second.result = {false, code, message};
      if (req->second.kind == RequestKind::kOrder) {
        auto it = orders_.find(req->second.local_order);
        if (it != orders_.end()) set_status(it->second, OrderStatus::kRejected, code + ": " + message);
      }
    }
  }
  emit("error", {{"code", code}, {"message", message}, {"ref_seq", ref}});
}

std::vector<LocalOrder> ClientCore::orders() const {
  std::vector<LocalOrder> out;
  for (const auto& id : order_ids_) out.push_back(orders_.at(id));
  return out;
}

const LocalOrder* ClientCore::order(const std::string& local_id) const {
  auto it = orders_.find(local_id);
  return it == orders_.end() ? nullptr : &it->second;
}

std::vector<PendingDecision> ClientCore::decisions(Clock::time_point now) const {
  std::vector<PendingDecision> out;
  for (const auto& [id, d] : pending_) {
    if (now < d.expires_at) out.push_back(d);
  }
  return out;
}

std::vector<SessionView> ClientCore::sessions() const {
  std::vector<SessionView> out;
  for (const auto& [id, s] : sessions_) out.push_back(s.view);
  return out;
}

std::optional<SessionView> ClientCore::session(const std::string& session_id) const {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) return std::nullopt;
  return it->second.view;
}

std::vector<Event> ClientCore::events_after(std::uint64_t id) const {
  std::vector<Event> out;
  for (const auto& e : events_) {
    if (e.id > id) out.push_back(e);
  }
  return out;
}

wire::Json to_json(const LocalOrder& o) {
  wire::Json timeline = wire::Json::array();
  for (const auto& c : o.timeline) {
    timeline.push_back({{"at_ms", c.at_ms},
                        {"status", std::string(order_status_name(c.status))},
                        {"note", c.note}});
  }
  wire::Json j = {{"id", o.local_id},
                  {"relay_id", o.relay_id},
                  {"buy", o.buy},
                  {"sell", o.sell},
                  {"size", o.size},
                  {"residual", o.residual},
                  {"status", std::string(order_status_name(o.status))},
                  {"timeline", std::move(timeline)}};
  j["limit"] = o.limit ? wire::Json(o.limit->to_string()) : wire::Json(nullptr);
  return j;
}

wire::Json to_json(const Fill& f) {
  return {{"session_id", f.session_id}, {"order", f.local_order}, {"relay_order", f.relay_order},
          {"base", f.base},             {"quote", f.quote},       {"price", f.price.to_string()},
          {"size", f.size},             {"side", f.bought ? "buy" : "sell"},
          {"at_ms", f.at_ms}};
}

wire::Json to_json(const PendingDecision& d, Clock::time_point now) {
  const auto left =
      std::chrono::duration_cast<std::chrono::milliseconds>(d.expires_at - now).count();
  wire::Json price = {{"result", std::string(price_check_name(d.price.result))},
                      {"quoted", d.price.quoted.to_string()}};
  price["reference"] =
      d.price.reference ? wire::Json(d.price.reference->to_string()) : wire::Json(nullptr);
  if (d.price.result == PriceCheck::kUnavailable) {
    price["warning"] = "reference price unavailable; check the quote yourself";
  }
  return {{"session_id", d.session_id},
          {"order", d.local_order},
          {"ticket", d.ticket.to_json()},
          {"price_check", std::move(price)},
          {"expires_at_ms", d.expires_at_ms},
          {"expires_in_ms", std::max<std::int64_t>(0, left)}};
}

wire::Json to_json(const SessionView& s) {
  wire::Json j = {{"session_id", s.session_id},
                  {"order", s.local_order},
                  {"role", s.role},
                  {"state", s.state},
                  {"progress", s.progress},
                  {"progress_total", 16},
                  {"reason", s.reason},
                  {"base", s.ticket.base},
                  {"quote", s.ticket.quote},
                  {"price", s.ticket.market_price.to_string()}};
  j["verdict"] = s.verdict ? wire::Json{{"smaller_role", s.verdict->smaller_role},
                                        {"is_strict", s.verdict->is_strict}}
                           : wire::Json(nullptr);
  j["fill_size"] = s.fill_size ? wire::Json(*s.fill_size) : wire::Json(nullptr);
  return j;
}

}  // namespace deepocean::client
