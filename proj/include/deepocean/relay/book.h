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

#ifndef DEEPOCEAN_RELAY_BOOK_H_
#define DEEPOCEAN_RELAY_BOOK_H_

// In-memory order book, FIFO per instrument.
//
// For instrument BASE/QUOTE the buy side buys BASE and sells QUOTE; the sell
// side does the opposite. Limits are quoted in QUOTE per BASE: a buy limit
// admits market <= limit, a sell limit admits market >= limit.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "deepocean/relay/store.h"

namespace deepocean::relay {

struct Instrument {
  std::string base;
  std::string quote;

  // "BTC/USD". Throws Error(kInvalidArgument).
  static Instrument parse(std::string_view text);
  std::string to_string() const { return base + "/" + quote; }
  friend auto operator<=>(const Instrument&, const Instrument&) = default;
};

enum class Side { kBuy, kSell, kNone };

Side side_of(const OrderRecord& order, const Instrument& instrument);
bool limit_admits(const OrderRecord& order, Side side, Decimal market);

struct MatchPair {
  std::string buy_order;
  std::string sell_order;
};

class OrderBook {
 public:
  void insert(OrderRecord order);
  OrderRecord* find(const std::string& order_id);
  const OrderRecord* find(const std::string& order_id) const;
  std::vector<const OrderRecord*> all() const;

  // Pairs the oldest eligible open buy with the oldest eligible open sell,
  // repeatedly. Paired orders move to kMatched. `allowed` can veto a pair.
  using PairFilter = std::function<bool(const OrderRecord& buy, const OrderRecord& sell)>;
  std::vector<MatchPair> match(const Instrument& instrument, Decimal market,
                               const PairFilter& allowed);

 private:
  std::map<std::string, OrderRecord> orders_;
};

}  // namespace deepocean::relay

#endif  // DEEPOCEAN_RELAY_BOOK_H_
