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

#ifndef DEEPOCEAN_RELAY_STORE_H_
#define DEEPOCEAN_RELAY_STORE_H_

// Single-file persistence for the relay: users, bans, orders, settlements.
// Orders carry no size; the only sizes on disk are revealed settlement sizes.
// Sessions are memory only.

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "deepocean/decimal.h"
#include "deepocean/group.h"

struct sqlite3;

namespace deepocean::relay {

enum class UserStatus { kActive, kBanned };

struct UserRecord {
  Point identity_key;
  std::string display_name;
  UserStatus status = UserStatus::kActive;
  std::int64_t registered_at_ms = 0;
};

enum class OrderState { kOpen, kMatched, kComparing, kRevealed, kSettled, kCancelled };

std::string_view order_state_name(OrderState s);
OrderState order_state_from_name(std::string_view name);

struct OrderRecord {
  std::string order_id;
  Point owner;
  std::string buy_asset;
  std::string sell_asset;
  std::optional<Decimal> limit_price;
  OrderState state = OrderState::kOpen;
  std::int64_t created_at_ms = 0;
  std::int64_t sequence = 0;  // FIFO position, assigned by the store
};

struct SettlementRecord {
  std::string session_id;
  std::string base;
  std::string quote;
  Decimal price;
  std::uint64_t size = 0;
  Point buyer;
  Point seller;
  std::string buy_order;
  std::string sell_order;
  std::int64_t settled_at_ms = 0;
};

// All methods throw Error(kStorage) on database failures. Thread-safe.
class RelayStore {
 public:
  // ":memory:" gives a private in-memory database.
  explicit RelayStore(const std::string& path);
  ~RelayStore();
  RelayStore(const RelayStore&) = delete;
  RelayStore& operator=(const RelayStore&) = delete;

  std::optional<UserRecord> user(const Point& key) const;
  void put_user(const UserRecord& user);
  void set_user_status(const Point& key, UserStatus status);

  // Assigns and returns the FIFO sequence.
  std::int64_t put_order(const OrderRecord& order);
  void set_order_state(const std::string& order_id, OrderState state);
  std::vector<OrderRecord> orders() const;

  void add_settlement(const SettlementRecord& s);
  std::vector<SettlementRecord> settlements() const;

  // Orders caught mid-session by a restart go back to open.
  void reopen_inflight_orders();

  std::optional<Bytes> meta(const std::string& key) const;
  void set_meta(const std::string& key, ByteSpan value);

 private:
  void exec(const char* sql);

  sqlite3* db_ = nullptr;
  mutable std::mutex mu_;
};

}  // namespace deepocean::relay

#endif  // DEEPOCEAN_RELAY_STORE_H_
