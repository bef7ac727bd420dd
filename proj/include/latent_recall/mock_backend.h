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

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "latent_recall/backend.h"

namespace latent_recall {

// Scripted answer for one prompt.
struct MockScript {
  std::string prompt;
  std::string greedy_completion;
  std::vector<TokenCandidate> candidates;
  // token_text of a candidate -> completion returned when the prompt is
  // re-issued with that token appended.
  std::map<std::string, std::string> continuations;
};

// Configuration of the deterministic mock backend.
struct GapModelSpec {
  int max_top_logprobs = 100;
  std::vector<MockScript> scripts;
  MockScript fallback;  // answers every unscripted prompt

  // Throws InputError on unsorted or positive logprobs, duplicate prompts or
  // continuation keys that are not candidates.
  void validate() const;
};

GapModelSpec parse_gap_model_spec(const nlohmann::json& doc);
nlohmann::json gap_model_spec_to_json(const GapModelSpec& spec);
GapModelSpec load_gap_model_spec(const std::string& path);

class MockBackend final : public LMBackend {
 public:
  explicit MockBackend(GapModelSpec spec, std::string source = "inline");

  BackendCapabilities capabilities() const override;
  AnswerDistribution complete(const CompletionRequest& request) override;
  std::string describe() const override;

  // Exact prompt lookup, then "scripted prompt + candidate token" lookup,
  // then the fallback script.
  AnswerDistribution mock_complete(std::string_view prompt, int top_k) const;

  const GapModelSpec& spec() const { return spec_; }

 private:
  struct Continuation {
    std::size_t script;
    std::string text;
  };

  GapModelSpec spec_;
  std::string source_;
  std::unordered_map<std::string, std::size_t> by_prompt_;
  std::unordered_map<std::string, Continuation> by_reprompt_;
};

}  // namespace latent_recall
