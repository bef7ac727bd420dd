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


#pragma once

#include <atomic>
#include <chrono>
#include <optional>
#include <string>

#include <json.hpp>

#include "latent_recall/backend.h"
#include "latent_recall/dump.h"

namespace latent_recall {

inline constexpr const char* kApiKeyEnv = "LATENT_RECALL_API_KEY";

struct EndpointConfig {
  std::string url;  // scheme://host[:port][/prefix]
  std::string model;  // omitted from requests when empty
  std::optional<std::string> api_key;
  int max_top_logprobs = 100;
  LogBase log_base = LogBase::kNatural;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::seconds connect_timeout{10};
  std::chrono::seconds read_timeout{120};

  // Reads the API key from LATENT_RECALL_API_KEY when it is set.
  static EndpointConfig from_env(std::string url);
};

// Body of POST {endpoint}/v1/completions. Keys are emitted sorted and
// temperature is always serialized as 0.0.
std::string build_completion_request_body(const CompletionRequest& request,
                                          const std::string& model);

// Client for OpenAI-compatible completion endpoints.
class HttpBackend final : public LMBackend {
 public:
  // Throws InputError on an unusable URL.
  explicit HttpBackend(EndpointConfig config);

  BackendCapabilities capabilities() const override;
  AnswerDistribution complete(const CompletionRequest& request) override;
  std::string describe() const override;

  // Number of retried attempts since construction.
  int retries() const { return retries_.load(); }

 private:
  EndpointConfig config_;
  std::string origin_;  // scheme://host:port
  std::string path_;    // prefix + /v1/completions
  std::atomic<int> retries_{0};
};

// One request with retries; the free-function form of HttpBackend.
AnswerDistribution http_complete(const CompletionRequest& request,
                                 const EndpointConfig& config);

}  // namespace latent_recall
