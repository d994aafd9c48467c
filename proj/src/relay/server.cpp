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

#include "deepocean/relay/server.h"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>

#include <boost/asio.hpp>

namespace deepocean::relay {

namespace asio = boost::asio;
using asio::ip::tcp;

namespace {

class Connection;
using ConnectionPtr = std::shared_ptr<Connection>;

}  // namespace

struct RelayServer::Impl {
  explicit Impl(ServerOptions o) : options(std::move(o)), acceptor(io), timer(io) {}

  ServerOptions options;
  asio::io_context io;
  tcp::acceptor acceptor;
  asio::steady_timer timer;
  std::vector<std::thread> workers;
  std::atomic<bool> running{false};

  std::mutex mu;  // guards routes and tap
  std::map<Point, std::weak_ptr<Connection>> routes;
  std::vector<std::weak_ptr<Connection>> connections;
  WireTap tap;

  std::mutex stop_mu;
  std::condition_variable stopped_cv;
  bool stopped = false;

  RelayCore* core = nullptr;
  unsigned short bound_port = 0;

  void accept();
  void schedule_tick();
  void deliver(const std::vector<Outgoing>& out, const ConnectionPtr& origin);
  void bind(const Point& key, const ConnectionPtr& conn);
  void tap_line(TapDirection dir, const std::optional<Point>& peer, std::string_view line) {
    WireTap t;
    {
      std::lock_guard lock(mu);
      t = tap;
    }
    if (t) t(dir, peer, line);
  }
};

namespace {

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, RelayServer::Impl& server)
      : socket_(std::move(socket)), strand_(socket_.get_executor()), server_(server) {}

  void start() { read(); }

  void send(std::string line) {
    line.push_back('\n');
    asio::post(strand_, [self = shared_from_this(), line = std::move(line)]() mutable {
      self->queue_.push_back(std::move(line));
      if (self->queue_.size() == 1) self->write();
    });
  }

  // Only once the io threads have stopped.
  void close_now() {
    boost::system::error_code ec;
    socket_.shutdown(tcp::socket::shutdown_both, ec);
    socket_.close(ec);
  }

  std::optional<Point> peer() const {
    std::lock_guard lock(peer_mu_);
    return peer_;
  }
  void set_peer(const Point& p) {
    std::lock_guard lock(peer_mu_);
    peer_ = p;
  }

 private:
  void read() {
    asio::async_read_until(
        socket_, asio::dynamic_buffer(buffer_, server_.options.max_line), '\n',
        asio::bind_executor(strand_, [self = shared_from_this()](auto ec, std::size_t n) {
          if (ec) return;
          std::string line = self->buffer_.substr(0, n - 1);
          self->buffer_.erase(0, n);
          if (!line.empty() && line.back() == '\r') line.pop_back();
          if (!line.empty()) self->dispatch(line);
          self->read();
        }));
  }

  void dispatch(const std::string& line) {
    server_.tap_line(TapDirection::kInbound, peer(), line);
    Dispatch d = server_.core->handle(line);
    if (d.bind) server_.bind(*d.bind, shared_from_this());
    server_.deliver(d.out, shared_from_this());
  }

  void write() {
    asio::async_write(
        socket_, asio::buffer(queue_.front()),
        asio::bind_executor(strand_, [self = shared_from_this()](auto ec, std::size_t) {
          if (ec) {
            self->queue_.clear();
            return;
          }
          self->queue_.pop_front();
          if (!self->queue_.empty()) self->write();
        }));
  }

  tcp::socket socket_;
  asio::strand<tcp::socket::executor_type> strand_;
  RelayServer::Impl& server_;
  std::string buffer_;
  std::deque<std::string> queue_;
  mutable std::mutex peer_mu_;
  std::optional<Point> peer_;
};

}  // namespace

void RelayServer::Impl::bind(const Point& key, const ConnectionPtr& conn) {
  conn->set_peer(key);
  std::lock_guard lock(mu);
  routes[key] = conn;
}

void RelayServer::Impl::deliver(const std::vector<Outgoing>& out, const ConnectionPtr& origin) {
  for (const auto& o : out) {
    ConnectionPtr target;
    if (!o.to) {
      target = origin;
    } else {
      std::lock_guard lock(mu);
      auto it = routes.find(*o.to);
      if (it != routes.end()) target = it->second.lock();
    }
    if (!target) continue;  // recipient offline; tickets and sessions time out
    tap_line(TapDirection::kOutbound, target->peer(), o.line);
    target->send(o.line);
  }
}

void RelayServer::Impl::accept() {
  acceptor.async_accept(asio::make_strand(io), [this](auto ec, tcp::socket socket) {
    if (ec) {
      if (running) accept();
      return;
    }
    socket.set_option(tcp::no_delay(true));
    auto conn = std::make_shared<Connection>(std::move(socket), *this);
    {
      std::lock_guard lock(mu);
      std::erase_if(connections, [](const auto& w) { return w.expired(); });
      connections.push_back(conn);
    }
    conn->start();
    accept();
  });
}

void RelayServer::Impl::schedule_tick() {
  timer.expires_after(options.tick_interval);
  timer.async_wait([this](auto ec) {
    if (ec || !running) return;
    deliver(core->tick(), nullptr);
    schedule_tick();
  });
}

RelayServer::RelayServer(std::shared_ptr<RelayCore> core, ServerOptions options)
    : core_(std::move(core)), impl_(std::make_unique<Impl>(std::move(options))) {
  impl_->core = core_.get();
}

RelayServer::~RelayServer() { stop(); }

void RelayServer::set_tap(WireTap tap) {
  std::lock_guard lock(impl_->mu);
  impl_->tap = std::move(tap);
}

void RelayServer::start() {
  try {
    const tcp::endpoint ep(asio::ip::make_address(impl_->options.host), impl_->options.port);
    impl_->acceptor.open(ep.protocol());
    impl_->acceptor.set_option(tcp::acceptor::reuse_address(true));
    impl_->acceptor.bind(ep);
    impl_->acceptor.listen();
    impl_->bound_port = impl_->acceptor.local_endpoint().port();
  } catch (const boost::system::system_error& e) {
    throw Error(ErrorCode::kTransport, std::string("relay listen: ") + e.what());
  }
  impl_->running = true;
  impl_->accept();
  impl_->schedule_tick();
  for (unsigned i = 0; i < std::max(1u, impl_->options.threads); ++i) {
    impl_->workers.emplace_back([this] { impl_->io.run(); });
  }
}

void RelayServer::stop() {
  if (!impl_ || !impl_->running.exchange(false)) return;
  impl_->io.stop();
  for (auto& t : impl_->workers) {
    if (t.joinable()) t.join();
  }
  impl_->workers.clear();
  boost::system::error_code ec;
  impl_->acceptor.close(ec);
  impl_->timer.cancel();
  {
    std::lock_guard lock(impl_->mu);
    for (auto& weak : impl_->connections) {
      if (auto c = weak.lock()) c->close_now();
    }
    impl_->connections.clear();
    impl_->routes.clear();
  }
  {
    std::lock_guard lock(impl_->stop_mu);
    impl_->stopped = true;
  }
  impl_->stopped_cv.notify_all();
}

unsigned short RelayServer::port() const { return impl_->bound_port; }

void RelayServer::wait() {
  std::unique_lock lock(impl_->stop_mu);
  impl_->stopped_cv.wait(lock, [this] { return impl_->stopped; });
}

}  // namespace deepocean::relay
