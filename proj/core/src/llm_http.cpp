// Copyright 2026 The synthsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP chat backend. Kept in its own translation unit so that only this file
// pulls in httplib and OpenSSL.

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "synthsel/llm.hpp"

namespace synthsel {

std::string HttpBackend::request_body(const ChatRequest& request, double temperature) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  nlohmann::json body{
      {"model", request.model}, {"messages", messages}, {"temperature", temperature}};
  if (request.max_output_tokens) body["max_tokens"] = *request.max_output_tokens;
  return body.dump();
}

ChatResponse HttpBackend::parse_response(const std::string& body) {
  try {
    const auto j = nlohmann::json::parse(body);
    ChatResponse r;
    r.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    if (j.contains("usage")) {
      const auto& u = j["usage"];
      if (u.contains("prompt_tokens")) r.input_tokens = u["prompt_tokens"].get<std::size_t>();
      if (u.contains("completion_tokens")) {
        r.output_tokens = u["completion_tokens"].get<std::size_t>();
      }
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(std::string("malformed chat response: ") + e.what());
  }
}

ChatResponse HttpBackend::complete(const ChatRequest& request) {
  const double left = std::chrono::duration<double>(request.deadline - Clock::now()).count();
  if (left <= 0) throw TransportError("deadline passed before the request was sent");
  const auto timeout = std::chrono::milliseconds(static_cast<long long>(left * 1000.0) + 1);

  httplib::Client client(config_.endpoint);
  if (!client.is_valid()) throw TransportError("invalid endpoint '" + config_.endpoint + "'");
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  httplib::Headers headers;
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw TransportError("environment variable " + config_.api_key_env + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  const std::string body = request_body(request, config_.temperature);

  // One reconnect on a transport failure; HTTP errors are final.
  httplib::Result res = client.Post(config_.path, headers, body, "application/json");
  if (!res && Clock::now() < request.deadline) {
    res = client.Post(config_.path, headers, body, "application/json");
  }
  if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw TransportError("HTTP " + std::to_string(res->status) + ": " +
                         res->body.substr(0, std::min<std::size_t>(res->body.size(), 200)));
  }
  return parse_response(res->body);
}

}  // namespace synthsel
