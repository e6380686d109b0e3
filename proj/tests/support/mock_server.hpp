/*
 * Copyright 2026 The LECOP Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LECOP_TESTS_SUPPORT_MOCK_SERVER_HPP_
#define LECOP_TESTS_SUPPORT_MOCK_SERVER_HPP_

#include <atomic>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "lecop/common.hpp"

namespace lecop::testing {

using Json = nlohmann::json;

// Deterministic vector for a prompt: four values derived from its hash.
std::vector<double> MockVector(const std::string& text) {
  std::vector<double> v;
  std::uint64_t h = DeriveSeed(0, text);
  for (int i = 0; i < 4; ++i) {
    v.push_back(static_cast<double>(h % 1000) / 100.0 - 5.0);
    h = DeriveSeed(h, static_cast<std::uint64_t>(i));
  }
  return v;
}

class MockServer {
 public:
  using Handler = std::function<void(const Json& request, httplib::Response& res)>;

  explicit MockServer(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      last_auth_ = req.get_header_value("Authorization");
      handler_(Json::parse(req.body), res);
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/embed"; }
  int requests() const { return requests_; }
  std::string last_auth() const { return last_auth_; }

 private:
  Handler handler_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> requests_{0};
  std::string last_auth_;
};

void Echo(const Json& req, httplib::Response& res) {
  Json out;
  out["embeddings"] = Json::array();
  for (const auto& text : req["input"]) out["embeddings"].push_back(MockVector(text));
  res.set_content(out.dump(), "application/json");
}

}  // namespace lecop::testing

#endif  // LECOP_TESTS_SUPPORT_MOCK_SERVER_HPP_
