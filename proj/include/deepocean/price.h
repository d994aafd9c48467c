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

#ifndef DEEPOCEAN_PRICE_H_
#define DEEPOCEAN_PRICE_H_

// Market price sources. The relay quotes from one; each client checks the
// quote against its own.
//
//   static:<decimal>            fixed value
//   url:http://host[:port]/path GET; body is a bare decimal, a JSON number,
//                               or a JSON object with a "price" field

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "deepocean/decimal.h"

namespace deepocean {

class PriceSource {
 public:
  virtual ~PriceSource() = default;
  // Throws on any failure (unreachable, unparsable).
  virtual Decimal fetch() = 0;
  virtual std::string describe() const = 0;
};

class StaticPrice final : public PriceSource {
 public:
  explicit StaticPrice(Decimal value) : value_(value) {}
  Decimal fetch() override { return value_; }
  std::string describe() const override { return "static:" + value_.to_string(); }

 private:
  Decimal value_;
};

class UrlPrice final : public PriceSource {
 public:
  explicit UrlPrice(std::string url);
  Decimal fetch() override;
  std::string describe() const override { return "url:" + url_; }

 private:
  std::string url_;
  std::string origin_;  // scheme://host:port
  std::string path_;
};

// Parses "static:<value>" or "url:<endpoint>". Throws Error(kInvalidArgument).
std::unique_ptr<PriceSource> make_price_source(std::string_view source);

// Parses a price body as served to UrlPrice.
Decimal parse_price_body(std::string_view body);

// Caching wrapper. A fresh fetch is attempted once the cached value is
// older than the refresh interval; on failure the cache is served until it
// is older than max_age. Non-positive prices count as failures.
class PriceFeed {
 public:
  using Clock = std::chrono::steady_clock;

  PriceFeed(std::unique_ptr<PriceSource> source, std::chrono::milliseconds max_age,
            std::chrono::milliseconds refresh = std::chrono::milliseconds(1000));

  // Throws Error(kStalePrice) when no acceptable price is available.
  Decimal price(Clock::time_point now = Clock::now());
  std::string describe() const { return source_->describe(); }

 private:
  std::unique_ptr<PriceSource> source_;
  std::chrono::milliseconds max_age_;
  std::chrono::milliseconds refresh_;
  std::optional<Decimal> cached_;
  Clock::time_point fetched_at_;
  std::mutex mu_;
};

}  // namespace deepocean

#endif  // DEEPOCEAN_PRICE_H_
