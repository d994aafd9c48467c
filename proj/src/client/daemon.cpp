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

#include "deepocean/client/daemon.h"

#include <atomic>
#include <charconv>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

#include <boost/asio.hpp>
#include <httplib.h>

namespace deepocean::client {

namespace asio = boost::asio;
using asio::ip::tcp;
using wire::Json;

namespace {

bool is_loopback(const std::string& host) {
  if (host == "localhost") return true;
  boost::system::error_code ec;
  const auto addr = asio::ip::make_address(host, ec);
  return !ec && addr.is_loopback();
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDecode:
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kSizeOutOfRange:
    case ErrorCode::kSameAssetPair:
      return 400;
    case ErrorCode::kNotRegistered:
    case ErrorCode::kBannedKey:
      return 403;
    case ErrorCode::kUnknownSession:
    case ErrorCode::kUnknownOrder:
      return 404;
    case ErrorCode::kProtocolOrderViolation:
      return 409;
    case ErrorCode::kDecisionExpired:
      return 410;
    case ErrorCode::kTransport:
      return 503;
    default:
      return 422;
  }
}

void reply_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  reply_json(res, http_status(code),
             {{"code", std::string(error_code_name(code))}, {"message", message}});
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    Json j = Json::parse(req.body);
    if (!j.is_object()) throw DecodeError("request body must be a JSON object");
    return j;
  } catch (const Json::exception& e) {
    throw DecodeError(std::string("bad JSON body: ") + e.what());
  }
}

// Accepts a JSON unsigned integer or a decimal string; anything outside
// [1, 2^64) is SizeOutOfRange.
std::uint64_t parse_size(const Json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() || j.is_number_float()) {
    throw Error(ErrorCode::kSizeOutOfRange, "size must be an integer in [1, 2^64)");
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc::result_out_of_range) {
      throw Error(ErrorCode::kSizeOutOfRange, "size must be below 2^64");
    }
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw Error(ErrorCode::kInvalidArgument, "size must be an integer");
    }
    return v;
  }
  throw Error(ErrorCode::kInvalidArgument, "size is required");
}

}  // namespace

struct ClientDaemon::Impl {
  Impl(ClientConfig config, elgamal::KeyPair identity, DaemonOptions o)
      : options(std::move(o)),
        socket(io),
        reconnect_timer(io),
        tick_timer(io),
        core(std::move(config), std::move(identity), rng,
             [this](std::string line) { enqueue(std::move(line)); }) {}

  DaemonOptions options;
  SystemRng rng;
  asio::io_context io;
  tcp::socket socket;
  asio::steady_timer reconnect_timer;
  asio::steady_timer tick_timer;
  std::string read_buffer;
  std::deque<std::string> write_queue;  // io thread only
  std::thread io_thread;
  std::atomic<bool> is_connected{false};
  std::atomic<bool> running{false};

  httplib::Server http;
  std::thread http_thread;
  int bound_port = 0;

  mutable std::mutex mu;  // guards core, tap
  std::condition_variable cv;
  ClientCore core;
  LineTap tap;

  std::mutex stop_mu;
  std::condition_variable stopped_cv;
  bool stopped = false;

  // Called with mu held (from the core's sender).
  void enqueue(std::string line) {
    if (tap) tap(true, line);
    line.push_back('\n');
    asio::post(io, [this, line = std::move(line)]() mutable {
      if (!is_connected) return;  // lost; the API reports the disconnect
      write_queue.push_back(std::move(line));
      if (write_queue.size() == 1) write_next();
    });
  }

  void write_next() {
    asio::async_write(socket, asio::buffer(write_queue.front()), [this](auto ec, std::size_t) {
      if (ec) {
        write_queue.clear();
        return;
      }
      write_queue.pop_front();
      if (!write_queue.empty()) write_next();
    });
  }

  void connect() {
    if (!running) return;
    tcp::resolver resolver(io);
    boost::system::error_code ec;
    const auto endpoints =
        resolver.resolve(options.relay_host, std::to_string(options.relay_port), ec);
    if (ec) {
      schedule_reconnect();
      return;
    }
    asio::async_connect(socket, endpoints, [this](auto ec, const tcp::endpoint&) {
      if (ec) {
        boost::system::error_code ignore;
        socket.close(ignore);
        schedule_reconnect();
        return;
      }
      socket.set_option(tcp::no_delay(true));
      is_connected = true;
      {
        std::lock_guard lock(mu);
        core.on_connected();
      }
      cv.notify_all();
      read();
    });
  }

  void schedule_reconnect() {
    if (!running) return;
    reconnect_timer.expires_after(options.reconnect_interval);
    reconnect_timer.async_wait([this](auto ec) {
      if (!ec) connect();
    });
  }

  void read() {
    asio::async_read_until(socket, asio::dynamic_buffer(read_buffer, 1 << 22), '\n',
                           [this](auto ec, std::size_t n) {
                             if (ec) {
                               disconnected();
                               return;
                             }
                             std::string line = read_buffer.substr(0, n - 1);
                             read_buffer.erase(0, n);
                             if (!line.empty() && line.back() == '\r') line.pop_back();
                             if (!line.empty()) {
                               std::lock_guard lock(mu);
                               if (tap) tap(false, line);
                               core.on_line(line);
                             }
                             cv.notify_all();
                             read();
                           });
  }

  void disconnected() {
    is_connected = false;
    boost::system::error_code ignore;
    socket.close(ignore);
    read_buffer.clear();
    write_queue.clear();
    cv.notify_all();
    schedule_reconnect();
  }

  void schedule_tick() {
    tick_timer.expires_after(options.tick_interval);
    tick_timer.async_wait([this](auto ec) {
      if (ec || !running) return;
      {
        std::lock_guard lock(mu);
        core.tick();
      }
      cv.notify_all();
      schedule_tick();
    });
  }

  // Waits (with mu held through `lock`) until `done` or the request timeout.
  template <class Pred>
  bool wait_for(std::unique_lock<std::mutex>& lock, Pred done) {
    return cv.wait_for(lock, options.request_timeout, done);
  }

  void require_connected() const {
    if (!is_connected) throw Error(ErrorCode::kTransport, "not connected to the relay");
  }

  Json status_json() const {
    Json j = {{"identity_key", wire::hex(core.identity().pk)},
              {"registered", core.registered()},
              {"banned", core.banned()},
              {"connected", is_connected.load()},
              {"relay", options.relay_host + ":" + std::to_string(options.relay_port)},
              {"last_event_id", core.last_event_id()}};
    j["relay_key"] = core.relay_key() ? Json(wire::hex(*core.relay_key())) : Json(nullptr);
    return j;
  }

  void routes();
};

void ClientDaemon::Impl::routes() {
  // Wraps a handler: serializes with the core and maps errors to statuses.
  auto guarded = [this](auto handler) {
    return [this, handler](const httplib::Request& req, httplib::Response& res) {
      try {
        std::unique_lock lock(mu);
        handler(req, res, lock);
      } catch (const Error& e) {
        reply_error(res, e.code(), e.what());
      } catch (const std::exception& e) {
        reply_error(res, ErrorCode::kInvalidArgument, e.what());
      }
      cv.notify_all();
    };
  };
  using Lock = std::unique_lock<std::mutex>;

  http.Get("/status", guarded([this](const auto&, auto& res, Lock&) {
    reply_json(res, 200, status_json());
  }));

  http.Post("/register", guarded([this](const auto& req, auto& res, Lock& lock) {
    require_connected();
    const Json body = parse_body(req);
    const std::uint64_t seq = core.register_user(body.value("display_name", ""));
    if (!wait_for(lock, [&] { return core.result(seq).has_value(); })) {
      throw Error(ErrorCode::kTransport, "the relay did not answer");
    }
    const auto r = *core.result(seq);
    if (!r.ok) {
      reply_json(res, 409, {{"code", r.code}, {"message", r.message}});
      return;
    }
    Json j = status_json();
    j["already_registered"] = r.code == "DuplicateKey";
    reply_json(res, 200, j);
  }));

  http.Get("/orders", guarded([this](const auto&, auto& res, Lock&) {
    Json out = Json::array();
    for (const auto& o : core.orders()) out.push_back(to_json(o));
    reply_json(res, 200, out);
  }));

  http.Post("/orders", guarded([this](const auto& req, auto& res, Lock& lock) {
    const Json body = parse_body(req);
    const std::uint64_t size = parse_size(body.value("size", Json()));
    std::optional<Decimal> limit;
    if (auto it = body.find("limit"); it != body.end() && !it->is_null()) {
      limit = Decimal::parse(it->is_string() ? it->get<std::string>() : it->dump());
    }
    const std::string buy = body.value("buy", "");
    const std::string sell = body.value("sell", "");
    if (buy.empty() || sell.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "buy and sell assets are required");
    }
    if (size == 0) throw Error(ErrorCode::kSizeOutOfRange, "size must be positive");
    if (!core.registered()) throw Error(ErrorCode::kNotRegistered, "register with the relay first");
    require_connected();
    const std::string id = core.place_order(buy, sell, size, limit).local_id;
    wait_for(lock, [&] { return core.order(id)->status != OrderStatus::kSubmitting; });
    const LocalOrder& o = *core.order(id);
    reply_json(res, o.status == OrderStatus::kRejected ? 422 : 201, to_json(o));
  }));

  http.Get("/orders/:id", guarded([this](const auto& req, auto& res, Lock&) {
    const LocalOrder* o = core.order(req.path_params.at("id"));
    if (!o) throw Error(ErrorCode::kUnknownOrder, "no such order");
    reply_json(res, 200, to_json(*o));
  }));

  http.Post("/orders/:id/cancel", guarded([this](const auto& req, auto& res, Lock& lock) {
    const std::string id = req.path_params.at("id");
    const LocalOrder* o = core.order(id);
    if (!o) throw Error(ErrorCode::kUnknownOrder, "no such order");
    if (o->status != OrderStatus::kHeld) require_connected();
    core.cancel_order(id);
    wait_for(lock, [&] { return core.order(id)->status != OrderStatus::kOpen; });
    reply_json(res, 200, to_json(*core.order(id)));
  }));

  http.Post("/orders/:id/resubmit", guarded([this](const auto& req, auto& res, Lock& lock) {
    require_connected();
    const std::string id = core.resubmit(req.path_params.at("id")).local_id;
    wait_for(lock, [&] { return core.order(id)->status != OrderStatus::kSubmitting; });
    reply_json(res, 201, to_json(*core.order(id)));
  }));

  http.Get("/decisions", guarded([this](const auto&, auto& res, Lock&) {
    const auto now = Clock::now();
    Json out = Json::array();
    for (const auto& d : core.decisions(now)) out.push_back(to_json(d, now));
    reply_json(res, 200, out);
  }));

  http.Post("/decisions/:sid/decide", guarded([this](const auto& req, auto& res, Lock&) {
    const Json body = parse_body(req);
    auto it = body.find("accept");
    if (it == body.end() || !it->is_boolean()) {
      throw Error(ErrorCode::kInvalidArgument, "accept must be true or false");
    }
    require_connected();
    const std::string sid = req.path_params.at("sid");
    core.decide(sid, it->get<bool>());
    const auto s = core.session(sid);
    reply_json(res, 200, s ? to_json(*s) : Json{{"session_id", sid}});
  }));

  http.Get("/sessions", guarded([this](const auto&, auto& res, Lock&) {
    Json out = Json::array();
    for (const auto& s : core.sessions()) out.push_back(to_json(s));
    reply_json(res, 200, out);
  }));

  http.Get("/sessions/:sid", guarded([this](const auto& req, auto& res, Lock&) {
    const auto s = core.session(req.path_params.at("sid"));
    if (!s) throw Error(ErrorCode::kUnknownSession, "no such session");
    reply_json(res, 200, to_json(*s));
  }));

  http.Get("/fills", guarded([this](const auto&, auto& res, Lock&) {
    Json out = Json::array();
    for (const auto& f : core.fills()) out.push_back(to_json(f));
    reply_json(res, 200, out);
  }));

  // Server-sent events; resumes after Last-Event-ID or ?since=.
  http.Get("/events", [this](const httplib::Request& req, httplib::Response& res) {
    std::uint64_t cursor = 0;
    const std::string from = req.has_header("Last-Event-ID") ? req.get_header_value("Last-Event-ID")
                                                             : req.get_param_value("since");
    std::from_chars(from.data(), from.data() + from.size(), cursor);
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream", [this, cursor](std::size_t, httplib::DataSink& sink) mutable {
          std::vector<Event> batch;
          {
            std::unique_lock lock(mu);
            cv.wait_for(lock, std::chrono::seconds(1), [&] {
              return !running || core.last_event_id() > cursor;
            });
            if (!running) {
              sink.done();
              return false;
            }
            batch = core.events_after(cursor);
          }
          std::string chunk;
          for (const auto& e : batch) {
            chunk += "id: " + std::to_string(e.id) + "\nevent: " + e.type +
                     "\ndata: " + e.data.dump() + "\n\n";
            cursor = e.id;
          }
          if (chunk.empty()) chunk = ": keep-alive\n\n";
          return sink.write(chunk.data(), chunk.size());
        });
  });
}

ClientDaemon::ClientDaemon(ClientConfig config, elgamal::KeyPair identity, DaemonOptions options) {
  if (!is_loopback(options.api_host)) {
    throw Error(ErrorCode::kInvalidArgument, "the local API only listens on loopback");
  }
  impl_ = std::make_unique<Impl>(std::move(config), std::move(identity), std::move(options));
}

ClientDaemon::~ClientDaemon() { stop(); }

void ClientDaemon::set_tap(LineTap tap) {
  std::lock_guard lock(impl_->mu);
  impl_->tap = std::move(tap);
}

void ClientDaemon::set_frame_tamper(FrameTamper tamper) {
  std::lock_guard lock(impl_->mu);
  impl_->core.set_frame_tamper(std::move(tamper));
}

void ClientDaemon::start() {
  impl_->routes();
  impl_->bound_port =
      impl_->options.api_port == 0
          ? impl_->http.bind_to_any_port(impl_->options.api_host)
          : (impl_->http.bind_to_port(impl_->options.api_host, impl_->options.api_port)
                 ? impl_->options.api_port
                 : -1);
  if (impl_->bound_port <= 0) {
    throw Error(ErrorCode::kTransport, "cannot bind the local API on " + impl_->options.api_host);
  }
  impl_->running = true;
  impl_->http_thread = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  asio::post(impl_->io, [this] { impl_->connect(); });
  impl_->schedule_tick();
  impl_->io_thread = std::thread([this] { impl_->io.run(); });
}

void ClientDaemon::stop() {
  if (!impl_ || !impl_->running.exchange(false)) return;
  impl_->cv.notify_all();
  impl_->http.stop();
  if (impl_->http_thread.joinable()) impl_->http_thread.join();
  impl_->io.stop();
  if (impl_->io_thread.joinable()) impl_->io_thread.join();
  boost::system::error_code ec;
  impl_->socket.close(ec);
  impl_->is_connected = false;
  {
    std::lock_guard lock(impl_->stop_mu);
    impl_->stopped = true;
  }
  impl_->stopped_cv.notify_all();
}

void ClientDaemon::wait() {
  std::unique_lock lock(impl_->stop_mu);
  impl_->stopped_cv.wait(lock, [this] { return impl_->stopped; });
}

unsigned short ClientDaemon::api_port() const {
  return static_cast<unsigned short>(impl_->bound_port);
}

bool ClientDaemon::connected() const { return impl_->is_connected; }

void ClientDaemon::with_core(const std::function<void(ClientCore&)>& f) {
  {
    std::lock_guard lock(impl_->mu);
    f(impl_->core);
  }
  impl_->cv.notify_all();
}

}  // namespace deepocean::client
