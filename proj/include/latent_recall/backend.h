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

#include <string>

#include "latent_recall/types.h"

namespace latent_recall {

struct BackendCapabilities {
  int max_top_logprobs = 0;
  bool supports_echo = false;
};

struct CompletionRequest {
  std::string record_id;  // used by backends that look answers up by id
  std::string prompt;
  int top_k = 1;
  int max_tokens = 32;
  int probe_position = 0;
  bool reprompt = false;  // second query of recall decoding
};

// A source of greedy completions with top-k candidates. Implementations
// must be safe to call from several threads at once.
class LMBackend {
 public:
  virtual ~LMBackend() = default;

  virtual BackendCapabilities capabilities() const = 0;

  // Returns at most min(top_k, max_top_logprobs) candidates in canonical
  // order. record_id of the result is copied from the request.
  virtual AnswerDistribution complete(const CompletionRequest& request) = 0;

  // Short stable description embedded in run manifests.
  virtual std::string describe() const = 0;
};

}  // namespace latent_recall
