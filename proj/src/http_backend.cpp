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


#include "latent_recall/http_backend.h"

#include <cstdlib>
#include <regex>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

namespace latent_recall {
namespace {

std::string excerpt(const std::string& body) {
  constexpr std::size_t kMax = 200;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

EndpointConfig EndpointConfig::from_env(std::string url) {
  EndpointConfig config;
  config.url = std::move(url);
  if (const char* key = std::getenv(kApiKeyEnv); key != nullptr && *key) {
    config.api_key = key;
  }
  return config;
}

std::string build_completion_request_body(const CompletionRequest& request,
                                          const std::string& model) {
  nlohmann::json body = nlohmann::json::object();
  body["prompt"] = request.prompt;
  body["max_tokens"] = request.max_tokens;
  body["temperature"] = 0.0;
  // The probe position needs its own top list, so ask for at least top_k.
  body["logprobs"] = request.top_k;
  if (!model.empty()) body["model"] = model;
  return body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

HttpBackend::HttpBackend(EndpointConfig config) : config_(std::move(config)) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.url, m, kUrl)) {
    throw InputError("endpoint URL must look like http://host[:port][/prefix], "
                     "got '" + config_.url + "'");
  }
  origin_ = m[1].str();
  std::string prefix = m[2].matched ? m[2].str() : "";
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/v1/completions";
  if (config_.max_top_logprobs < 1) {
    throw InputError("max_top_logprobs must be >= 1");
  }
  if (config_.max_attempts < 1) throw InputError("retry attempts must be >= 1");
}

BackendCapabilities HttpBackend::capabilities() const {
  return {config_.max_top_logprobs, false};
}

AnswerDistribution HttpBackend::complete(const CompletionRequest& request) {
  if (request.top_k > config_.max_top_logprobs) {
    throw BackendError("endpoint supports " +
                       std::to_string(config_.max_top_logprobs) +
                       " top logprobs, " + std::to_string(request.top_k) +
                       " requested");
  }
  const std::string body = build_completion_request_body(request, config_.model);
  httplib::Headers headers;
  if (config_.api_key) {
    headers.emplace("Authorization", "Bearer " + *config_.api_key);
  }

  std::string last_error;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    if (attempt > 1) {
      const auto delay = config_.initial_backoff * (1 << (attempt - 2));
      spdlog::warn("POST {}{} failed ({}); retry {}/{} in {} ms", origin_, path_,
                   last_error, attempt - 1, config_.max_attempts - 1,
                   delay.count());
      retries_.fetch_add(1);
      std::this_thread::sleep_for(delay);
    }

    httplib::Client client(origin_);
    client.set_connection_timeout(config_.connect_timeout);
    client.set_read_timeout(config_.read_timeout);
    const auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      last_error = "HTTP " + std::to_string(res->status) + ": " + excerpt(res->body);
      if (retryable_status(res->status)) continue;
      throw BackendError(last_error);
    }

    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(std::string("response is not JSON: ") + e.what());
    }
    AnswerDistribution dist = distribution_from_completion_response(
        doc, request.top_k, request.probe_position, config_.log_base);
    dist.record_id = request.record_id;
    return dist;
  }
  throw BackendError("giving up after " + std::to_string(config_.max_attempts) +
                     " attempts: " + last_error);
}

std::string HttpBackend::describe() const {
  return "http:" + origin_ + path_ +
         (config_.model.empty() ? "" : " model=" + config_.model);
}

AnswerDistribution http_complete(const CompletionRequest& request,
                                 const EndpointConfig& config) {
  HttpBackend backend(config);
  return backend.complete(request);
}

}  // namespace latent_recall
