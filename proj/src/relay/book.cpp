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

#include "deepocean/relay/book.h"

#include <algorithm>

#include "deepocean/errors.h"

namespace deepocean::relay {

Instrument Instrument::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos || slash == 0 || slash + 1 == text.size()) {
    throw Error(ErrorCode::kInvalidArgument, "instrument must look like BASE/QUOTE");
  }
  Instrument i{std::string(text.substr(0, slash)), std::string(text.substr(slash + 1))};
  if (i.base == i.quote) throw Error(ErrorCode::kSameAssetPair, "instrument uses one asset");
  return i;
}

Side side_of(const OrderRecord& o, const Instrument& inst) {
  if (o.buy_asset == inst.base && o.sell_asset == inst.quote) return Side::kBuy;
  if (o.buy_asset == inst.quote && o.sell_asset == inst.base) return Side::kSell;
  return Side::kNone;
}

bool limit_admits(const OrderRecord& o, Side side, Decimal market) {
  if (!o.limit_price) return true;
  switch (side) {
    case Side::kBuy: return market <= *o.limit_price;
    case Side::kSell: return market >= *o.limit_price;
    case Side::kNone: return false;
  }
  return false;
}

void OrderBook::insert(OrderRecord order) {
  const std::string id = order.order_id;
  orders_.insert_or_assign(id, std::move(order));
}

OrderRecord* OrderBook::find(const std::string& id) {
  auto it = orders_.find(id);
  return it == orders_.end() ? nullptr : &it->second;
}

const OrderRecord* OrderBook::find(const std::string& id) const {
  auto it = orders_.find(id);
  return it == orders_.end() ? nullptr : &it->second;
}

std::vector<const OrderRecord*> OrderBook::all() const {
  std::vector<const OrderRecord*> out;
  for (const auto& [id, o] : orders_) out.push_back(&o);
  std::sort(out.begin(), out.end(),
            [](const auto* a, const auto* b) { return a->sequence < b->sequence; });
  return out;
}

std::vector<MatchPair> OrderBook::match(const Instrument& inst, Decimal market,
                                        const PairFilter& allowed) {
  std::vector<OrderRecord*> buys, sells;
  for (auto& [id, o] : orders_) {
    if (o.state != OrderState::kOpen) continue;
    const Side side = side_of(o, inst);
    if (side == Side::kNone || !limit_admits(o, side, market)) continue;
    (side == Side::kBuy ? buys : sells).push_back(&o);
  }
  const auto fifo = [](const OrderRecord* a, const OrderRecord* b) {
    return a->sequence < b->sequence;
  };
  std::sort(buys.begin(), buys.end(), fifo);
  std::sort(sells.begin(), sells.end(), fifo);

  std::vector<MatchPair> out;
  for (OrderRecord* buy : buys) {
    for (OrderRecord* sell : sells) {
      if (sell->state != OrderState::kOpen) continue;
      if (sell->owner == buy->owner) continue;  // no self-trades
      if (allowed && !allowed(*buy, *sell)) continue;
      buy->state = OrderState::kMatched;
      sell->state = OrderState::kMatched;
      out.push_back({buy->order_id, sell->order_id});
      break;
    }
  }
  return out;
}

}  // namespace deepocean::relay
