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

#include "deepocean/price.h"

#include <cctype>

#include <httplib.h>
#include <json.hpp>

#include "deepocean/errors.h"

namespace deepocean {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Decimal parse_price_body(std::string_view body) {
  body = trim(body);
  if (!body.empty() && body.front() == '{') {
    const auto j = nlohmann::json::parse(body);
    const auto& p = j.at("price");
    // Numbers go through their textual form so no binary rounding creeps in.
    return Decimal::parse(p.is_string() ? p.get<std::string>() : p.dump());
  }
  return Decimal::parse(body);
}

UrlPrice::UrlPrice(std::string url) : url_(std::move(url)) {
  const auto scheme = url_.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "price url needs a scheme: " + url_);
  }
  const auto slash = url_.find('/', scheme + 3);
  origin_ = url_.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : url_.substr(slash);
}

Decimal UrlPrice::fetch() {
  httplib::Client client(origin_);
  client.set_connection_timeout(2);
  client.set_read_timeout(2);
  auto res = client.Get(path_);
  if (!res) throw Error(ErrorCode::kStalePrice, "price source unreachable: " + url_);
  if (res->status != 200) {
    throw Error(ErrorCode::kStalePrice, "price source returned " + std::to_string(res->status));
  }
  return parse_price_body(res->body);
}

std::unique_ptr<PriceSource> make_price_source(std::string_view source) {
  if (source.starts_with("static:")) {
    return std::make_unique<StaticPrice>(Decimal::parse(source.substr(7)));
  }
  if (source.starts_with("url:")) return std::make_unique<UrlPrice>(std::string(source.substr(4)));
  throw Error(ErrorCode::kInvalidArgument,
              "price source must be static:<value> or url:<endpoint>, got '" + std::string(source) +
                  "'");
}

PriceFeed::PriceFeed(std::unique_ptr<PriceSource> source, std::chrono::milliseconds max_age,
                     std::chrono::milliseconds refresh)
    : source_(std::move(source)), max_age_(max_age), refresh_(refresh) {}

Decimal PriceFeed::price(Clock::time_point now) {
  std::lock_guard lock(mu_);
  if (cached_ && now - fetched_at_ < refresh_) return *cached_;
  std::string why;
  try {
    const Decimal p = source_->fetch();
    if (p.positive()) {
      cached_ = p;
      fetched_at_ = now;
      return p;
    }
    why = "non-positive price " + p.to_string();
  } catch (const std::exception& e) {
    why = e.what();
  }
  if (cached_ && now - fetched_at_ <= max_age_) return *cached_;
  throw Error(ErrorCode::kStalePrice, source_->describe() + ": " + why);
}

}  // namespace deepocean
