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

#include "deepocean/relay/store.h"

#include <sqlite3.h>

#include "deepocean/errors.h"

namespace deepocean::relay {

namespace {

[[noreturn]] void fail(sqlite3* db, const std::string& what) {
  throw Error(ErrorCode::kStorage, what + ": " + (db ? sqlite3_errmsg(db) : "no database"));
}

// Prepared statement with positional binds.
class Stmt {
 public:
  Stmt(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) fail(db, "prepare");
  }
  ~Stmt() { sqlite3_finalize(stmt_); }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  Stmt& bind(int i, const std::string& v) {
    check(sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
    return *this;
  }
  Stmt& bind(int i, ByteSpan v) {
    check(sqlite3_bind_blob(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
    return *this;
  }
  Stmt& bind(int i, std::int64_t v) {
    check(sqlite3_bind_int64(stmt_, i, v));
    return *this;
  }
  Stmt& bind_null(int i) {
    check(sqlite3_bind_null(stmt_, i));
    return *this;
  }

  // True while rows remain.
  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    fail(db_, "step");
  }
  void run() {
    while (step()) {
    }
  }

  std::string text(int col) const {
    const auto* p = sqlite3_column_text(stmt_, col);
    return p ? std::string(reinterpret_cast<const char*>(p)) : std::string();
  }
  Bytes blob(int col) const {
    const auto* p = static_cast<const std::uint8_t*>(sqlite3_column_blob(stmt_, col));
    return Bytes(p, p + sqlite3_column_bytes(stmt_, col));
  }
  std::int64_t i64(int col) const { return sqlite3_column_int64(stmt_, col); }
  bool is_null(int col) const { return sqlite3_column_type(stmt_, col) == SQLITE_NULL; }

 private:
  void check(int rc) {
    if (rc != SQLITE_OK) fail(db_, "bind");
  }
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS users (
  identity_key BLOB PRIMARY KEY,
  display_name TEXT NOT NULL,
  status TEXT NOT NULL,
  registered_at_ms INTEGER NOT NULL);
CREATE TABLE IF NOT EXISTS orders (
  sequence INTEGER PRIMARY KEY AUTOINCREMENT,
  order_id TEXT UNIQUE NOT NULL,
  owner BLOB NOT NULL,
  buy_asset TEXT NOT NULL,
  sell_asset TEXT NOT NULL,
  limit_price TEXT,
  state TEXT NOT NULL,
  created_at_ms INTEGER NOT NULL);
CREATE TABLE IF NOT EXISTS settlements (
  session_id TEXT PRIMARY KEY,
  base TEXT NOT NULL,
  quote TEXT NOT NULL,
  price TEXT NOT NULL,
  size INTEGER NOT NULL,
  buyer BLOB NOT NULL,
  seller BLOB NOT NULL,
  buy_order TEXT NOT NULL,
  sell_order TEXT NOT NULL,
  settled_at_ms INTEGER NOT NULL);
CREATE TABLE IF NOT EXISTS meta (
  key TEXT PRIMARY KEY,
  value BLOB NOT NULL);
)sql";

ByteSpan key_bytes(const Point& p) { return p.to_bytes(); }

}  // namespace

std::string_view order_state_name(OrderState s) {
  switch (s) {
    case OrderState::kOpen: return "open";
    case OrderState::kMatched: return "matched";
    case OrderState::kComparing: return "comparing";
    case OrderState::kRevealed: return "revealed";
    case OrderState::kSettled: return "settled";
    case OrderState::kCancelled: return "cancelled";
  }
  return "unknown";
}

OrderState order_state_from_name(std::string_view name) {
  for (OrderState s : {OrderState::kOpen, OrderState::kMatched, OrderState::kComparing,
                       OrderState::kRevealed, OrderState::kSettled, OrderState::kCancelled}) {
    if (order_state_name(s) == name) return s;
  }
  throw Error(ErrorCode::kStorage, "unknown order state '" + std::string(name) + "'");
}

RelayStore::RelayStore(const std::string& path) {
  if (sqlite3_open(path.c_str(), &db_) != SQLITE_OK) {
    const std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    db_ = nullptr;
    throw Error(ErrorCode::kStorage, "open " + path + ": " + msg);
  }
  exec("PRAGMA journal_mode=WAL;");
  exec("PRAGMA synchronous=FULL;");
  exec(kSchema);
}

RelayStore::~RelayStore() { sqlite3_close(db_); }

void RelayStore::exec(const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    const std::string msg = err ? err : "unknown";
    sqlite3_free(err);
    throw Error(ErrorCode::kStorage, msg);
  }
}

std::optional<UserRecord> RelayStore::user(const Point& key) const {
  std::lock_guard lock(mu_);
  Stmt q(db_, "SELECT display_name, status, registered_at_ms FROM users WHERE identity_key = ?");
  q.bind(1, key_bytes(key));
  if (!q.step()) return std::nullopt;
  UserRecord u;
  u.identity_key = key;
  u.display_name = q.text(0);
  u.status = q.text(1) == "banned" ? UserStatus::kBanned : UserStatus::kActive;
  u.registered_at_ms = q.i64(2);
  return u;
}

void RelayStore::put_user(const UserRecord& u) {
  std::lock_guard lock(mu_);
  Stmt q(db_,
         "INSERT OR REPLACE INTO users (identity_key, display_name, status, registered_at_ms) "
         "VALUES (?, ?, ?, ?)");
  q.bind(1, key_bytes(u.identity_key))
      .bind(2, u.display_name)
      .bind(3, std::string(u.status == UserStatus::kBanned ? "banned" : "active"))
      .bind(4, u.registered_at_ms)
      .run();
}

void RelayStore::set_user_status(const Point& key, UserStatus status) {
  std::lock_guard lock(mu_);
  Stmt q(db_, "UPDATE users SET status = ? WHERE identity_key = ?");
  q.bind(1, std::string(status == UserStatus::kBanned ? "banned" : "active"))
      .bind(2, key_bytes(key))
      .run();
}

std::int64_t RelayStore::put_order(const OrderRecord& o) {
  std::lock_guard lock(mu_);
  Stmt q(db_,
         "INSERT INTO orders (order_id, owner, buy_asset, sell_asset, limit_price, state, "
         "created_at_ms) VALUES (?, ?, ?, ?, ?, ?, ?)");
  q.bind(1, o.order_id).bind(2, key_bytes(o.owner)).bind(3, o.buy_asset).bind(4, o.sell_asset);
  if (o.limit_price) {
    q.bind(5, o.limit_price->to_string());
  } else {
    q.bind_null(5);
  }
  q.bind(6, std::string(order_state_name(o.state))).bind(7, o.created_at_ms).run();
  return sqlite3_last_insert_rowid(db_);
}

void RelayStore::set_order_state(const std::string& order_id, OrderState state) {
  std::lock_guard lock(mu_);
  Stmt q(db_, "UPDATE orders SET state = ? WHERE order_id = ?");
  q.bind(1, std::string(order_state_name(state))).bind(2, order_id).run();
}

std::vector<OrderRecord> RelayStore::orders() const {
  std::lock_guard lock(mu_);
  Stmt q(db_,
         "SELECT sequence, order_id, owner, buy_asset, sell_asset, limit_price, state, "
         "created_at_ms FROM orders ORDER BY sequence");
  std::vector<OrderRecord> out;
  while (q.step()) {
    OrderRecord o;
    o.sequence = q.i64(0);
    o.order_id = q.text(1);
    o.owner = Point::from_bytes(q.blob(2));
    o.buy_asset = q.text(3);
    o.sell_asset = q.text(4);
    if (!q.is_null(5)) o.limit_price = Decimal::parse(q.text(5));
    o.state = order_state_from_name(q.text(6));
    o.created_at_ms = q.i64(7);
    out.push_back(std::move(o));
  }
  return out;
}

void RelayStore::add_settlement(const SettlementRecord& s) {
  std::lock_guard lock(mu_);
  Stmt q(db_,
         "INSERT INTO settlements (session_id, base, quote, price, size, buyer, seller, "
         "buy_order, sell_order, settled_at_ms) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)");
  q.bind(1, s.session_id)
      .bind(2, s.base)
      .bind(3, s.quote)
      .bind(4, s.price.to_string())
      .bind(5, static_cast<std::int64_t>(s.size))
      .bind(6, key_bytes(s.buyer))
      .bind(7, key_bytes(s.seller))
      .bind(8, s.buy_order)
      .bind(9, s.sell_order)
      .bind(10, s.settled_at_ms)
      .run();
}

std::vector<SettlementRecord> RelayStore::settlements() const {
  std::lock_guard lock(mu_);
  Stmt q(db_,
         "SELECT session_id, base, quote, price, size, buyer, seller, buy_order, sell_order, "
         "settled_at_ms FROM settlements ORDER BY settled_at_ms");
  std::vector<SettlementRecord> out;
  while (q.step()) {
    SettlementRecord s;
    s.session_id = q.text(0);
    s.base = q.text(1);
    s.quote = q.text(2);
    s.price = Decimal::parse(q.text(3));
    s.size = static_cast<std::uint64_t>(q.i64(4));
    s.buyer = Point::from_bytes(q.blob(5));
    s.seller = Point::from_bytes(q.blob(6));
    s.buy_order = q.text(7);
    s.sell_order = q.text(8);
    s.settled_at_ms = q.i64(9);
    out.push_back(std::move(s));
  }
  return out;
}

void RelayStore::reopen_inflight_orders() {
  std::lock_guard lock(mu_);
  exec("UPDATE orders SET state = 'open' WHERE state IN ('matched', 'comparing');");
}

std::optional<Bytes> RelayStore::meta(const std::string& key) const {
  std::lock_guard lock(mu_);
  Stmt q(db_, "SELECT value FROM meta WHERE key = ?");
  q.bind(1, key);
  if (!q.step()) return std::nullopt;
  return q.blob(0);
}

void RelayStore::set_meta(const std::string& key, ByteSpan value) {
  std::lock_guard lock(mu_);
  Stmt q(db_, "INSERT OR REPLACE INTO meta (key, value) VALUES (?, ?)");
  q.bind(1, key).bind(2, value).run();
}

}  // namespace deepocean::relay
