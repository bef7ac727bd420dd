// Copyright 2026 The Latent Recall Authors.
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


#include "latent_recall/mock_server.h"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "latent_recall/serialize.h"

namespace latent_recall {
namespace {

std::string error_body(const std::string& message, const std::string& type) {
  Json doc;
  doc["error"]["message"] = message;
  doc["error"]["type"] = type;
  return dump_compact(doc);
}

}  // namespace

MockServer::MockServer(GapModelSpec spec, MockServerOptions options)
    : backend_(std::move(spec), "server"),
      options_(std::move(options)),
      server_(std::make_unique<httplib::Server>()),
      failures_left_(options_.fail_first) {
  // SO_REUSEADDR only; binding a taken port must fail.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  server_->Post("/v1/completions",
                [this](const httplib::Request& req, httplib::Response& res) {
                  auto [status, body] = handle_completion(req.body);
                  res.status = status;
                  res.set_content(body, "application/json");
                });
  server_->Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });
}

MockServer::~MockServer() { stop(); }

void MockServer::start() {
  if (thread_.joinable()) return;
  if (options_.port == 0) {
    port_ = server_->bind_to_any_port(options_.host);
  } else {
    port_ = server_->bind_to_port(options_.host, options_.port) ? options_.port
                                                                : -1;
  }
  if (port_ < 0) {
    throw InputError("cannot bind mock server to " + options_.host + ":" +
                     std::to_string(options_.port) + " (port in use?)");
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void MockServer::stop() {
  if (!thread_.joinable()) return;
  server_->stop();
  thread_.join();
}

std::string MockServer::url() const {
  return "http://" + options_.host + ":" + std::to_string(port_);
}

std::vector<std::string> MockServer::received_bodies() const {
  std::lock_guard<std::mutex> lock(mu_);
  return bodies_;
}

std::pair<int, std::string> MockServer::handle_completion(
    const std::string& body) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    bodies_.push_back(body);
  }
  if (failures_left_.load() > 0 && failures_left_.fetch_sub(1) > 0) {
    spdlog::info("mock server: scripted failure");
    return {500, error_body("scripted failure", "server_error")};
  }

  nlohmann::json req;
  try {
    req = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    return {400, error_body(std::string("body is not JSON: ") + e.what(),
                            "invalid_request_error")};
  }
  if (!req.is_object()) {
    return {400, error_body("body must be a JSON object", "invalid_request_error")};
  }
  if (!req.contains("prompt") || !req["prompt"].is_string()) {
    return {400, error_body("'prompt' must be a string", "invalid_request_error")};
  }
  if (req.contains("max_tokens") && !req["max_tokens"].is_number_integer()) {
    return {400, error_body("'max_tokens' must be an integer",
                            "invalid_request_error")};
  }
  if (req.contains("temperature") && !req["temperature"].is_number()) {
    return {400, error_body("'temperature' must be a number",
                            "invalid_request_error")};
  }
  std::optional<int> top_k;
  if (req.contains("logprobs") && !req["logprobs"].is_null()) {
    if (!req["logprobs"].is_number_integer() || req["logprobs"].get<int>() < 0) {
      return {400, error_body("'logprobs' must be a non-negative integer",
                              "invalid_request_error")};
    }
    top_k = req["logprobs"].get<int>();
  }

  const std::string prompt = req["prompt"].get<std::string>();
  const AnswerDistribution dist = backend_.mock_complete(prompt, top_k.value_or(0));

  Json choice;
  choice["index"] = 0;
  choice["text"] = dist.greedy_completion;
  if (top_k) {
    Json top = Json::object();
    for (const auto& c : dist.candidates) top[c.token_text] = c.logprob;
    Json logprobs;
    logprobs["tokens"] = Json::array({dist.greedy_completion});
    logprobs["token_logprobs"] =
        Json::array({dist.candidates.empty() ? 0.0 : dist.candidates[0].logprob});
    logprobs["top_logprobs"] = Json::array({std::move(top)});
    logprobs["text_offset"] = Json::array({prompt.size()});
    choice["logprobs"] = std::move(logprobs);
  } else {
    choice["logprobs"] = nullptr;
  }
  choice["finish_reason"] = "stop";

  Json res;
  res["id"] = "cmpl-mock";
  res["object"] = "text_completion";
  res["created"] = 0;
  res["model"] = req.contains("model") && req["model"].is_string()
                     ? req["model"].get<std::string>()
                     : std::string("mock-gap-model");
  res["choices"] = Json::array({std::move(choice)});
  return {200, dump_compact(res)};
}

}  // namespace latent_recall
