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


#include "latent_recall/mock_backend.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace latent_recall {
namespace {

using nlohmann::json;

std::vector<TokenCandidate> parse_candidates(const json& doc,
                                             const std::string& where) {
  if (!doc.is_array()) throw InputError(where + ": candidates must be an array");
  std::vector<TokenCandidate> out;
  for (const auto& c : doc) {
    if (!c.is_object() || !c.contains("token") || !c["token"].is_string() ||
        !c.contains("logprob") || !c["logprob"].is_number()) {
      throw InputError(where + ": candidate needs string token and number logprob");
    }
    out.push_back({c["token"].get<std::string>(), c["logprob"].get<double>(),
                   static_cast<int>(out.size()) + 1});
  }
  return out;
}

MockScript parse_script(const json& doc, bool needs_prompt,
                        const std::string& where) {
  if (!doc.is_object()) throw InputError(where + " must be an object");
  MockScript script;
  if (needs_prompt) {
    if (!doc.contains("prompt") || !doc["prompt"].is_string()) {
      throw InputError(where + ": missing string field 'prompt'");
    }
    script.prompt = doc["prompt"].get<std::string>();
  }
  if (!doc.contains("greedy_completion") ||
      !doc["greedy_completion"].is_string()) {
    throw InputError(where + ": missing string field 'greedy_completion'");
  }
  script.greedy_completion = doc["greedy_completion"].get<std::string>();
  if (!doc.contains("candidates")) {
    throw InputError(where + ": missing field 'candidates'");
  }
  script.candidates = parse_candidates(doc["candidates"], where);
  if (doc.contains("continuations")) {
    const json& cont = doc["continuations"];
    if (!cont.is_object()) {
      throw InputError(where + ": continuations must be an object");
    }
    for (const auto& [token, text] : cont.items()) {
      if (!text.is_string()) {
        throw InputError(where + ": continuation values must be strings");
      }
      script.continuations[token] = text.get<std::string>();
    }
  }
  return script;
}

json script_to_json(const MockScript& script, bool with_prompt) {
  json doc = json::object();
  if (with_prompt) doc["prompt"] = script.prompt;
  doc["greedy_completion"] = script.greedy_completion;
  json cands = json::array();
  for (const auto& c : script.candidates) {
    cands.push_back({{"token", c.token_text}, {"logprob", c.logprob}});
  }
  doc["candidates"] = std::move(cands);
  doc["continuations"] = script.continuations;
  return doc;
}

void validate_script(const MockScript& script, const std::string& where) {
  std::set<std::string> tokens;
  for (std::size_t i = 0; i < script.candidates.size(); ++i) {
    const auto& c = script.candidates[i];
    if (!std::isfinite(c.logprob) || c.logprob > 0.0) {
      throw InputError(where + ": candidate logprobs must be finite and <= 0");
    }
    if (i > 0 && !candidate_before(script.candidates[i - 1], c)) {
      throw InputError(where + ": candidates are not sorted by logprob "
                               "descending (ties by token)");
    }
    if (!tokens.insert(c.token_text).second) {
      throw InputError(where + ": duplicate candidate token '" + c.token_text +
                       "'");
    }
  }
  for (const auto& [token, text] : script.continuations) {
    if (!tokens.contains(token)) {
      throw InputError(where + ": continuation key '" + token +
                       "' is not a candidate token");
    }
  }
}

AnswerDistribution script_distribution(const MockScript& script, int k) {
  AnswerDistribution dist;
  dist.greedy_completion = script.greedy_completion;
  const auto n = std::min<std::size_t>(script.candidates.size(),
                                       static_cast<std::size_t>(std::max(k, 0)));
  dist.candidates.assign(script.candidates.begin(),
                         script.candidates.begin() + static_cast<long>(n));
  canonicalize_candidates(dist.candidates);
  return dist;
}

}  // namespace

void GapModelSpec::validate() const {
  if (max_top_logprobs < 1) {
    throw InputError("gap model spec: max_top_logprobs must be >= 1");
  }
  std::set<std::string> prompts;
  for (std::size_t i = 0; i < scripts.size(); ++i) {
    const std::string where = "gap model spec script " + std::to_string(i);
    validate_script(scripts[i], where);
    if (!prompts.insert(scripts[i].prompt).second) {
      throw InputError(where + ": duplicate prompt");
    }
  }
  validate_script(fallback, "gap model spec default script");
}

GapModelSpec parse_gap_model_spec(const json& doc) {
  if (!doc.is_object()) throw InputError("gap model spec must be a JSON object");
  GapModelSpec spec;
  if (doc.contains("max_top_logprobs")) {
    if (!doc["max_top_logprobs"].is_number_integer()) {
      throw InputError("gap model spec: max_top_logprobs must be an integer");
    }
    spec.max_top_logprobs = doc["max_top_logprobs"].get<int>();
  }
  if (doc.contains("scripts")) {
    if (!doc["scripts"].is_array()) {
      throw InputError("gap model spec: scripts must be an array");
    }
    for (const auto& s : doc["scripts"]) {
      spec.scripts.push_back(parse_script(
          s, true, "gap model spec script " + std::to_string(spec.scripts.size())));
    }
  }
  if (!doc.contains("default")) {
    throw InputError("gap model spec: missing 'default' script");
  }
  spec.fallback = parse_script(doc["default"], false, "gap model spec default");
  spec.validate();
  return spec;
}

json gap_model_spec_to_json(const GapModelSpec& spec) {
  json doc = json::object();
  doc["max_top_logprobs"] = spec.max_top_logprobs;
  json scripts = json::array();
  for (const auto& s : spec.scripts) scripts.push_back(script_to_json(s, true));
  doc["scripts"] = std::move(scripts);
  doc["default"] = script_to_json(spec.fallback, false);
  return doc;
}

GapModelSpec load_gap_model_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read gap model spec " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("gap model spec " + path + ": " + e.what());
  }
  return parse_gap_model_spec(doc);
}

MockBackend::MockBackend(GapModelSpec spec, std::string source)
    : spec_(std::move(spec)), source_(std::move(source)) {
  spec_.validate();
  for (std::size_t i = 0; i < spec_.scripts.size(); ++i) {
    by_prompt_.emplace(spec_.scripts[i].prompt, i);
  }
  for (std::size_t i = 0; i < spec_.scripts.size(); ++i) {
    for (const auto& [token, text] : spec_.scripts[i].continuations) {
      const std::string reprompt = spec_.scripts[i].prompt + token;
      // A scripted prompt always wins over a re-prompt with the same text.
      if (!by_prompt_.contains(reprompt)) {
        by_reprompt_.emplace(reprompt, Continuation{i, text});
      }
    }
  }
}

BackendCapabilities MockBackend::capabilities() const {
  return {spec_.max_top_logprobs, false};
}

AnswerDistribution MockBackend::mock_complete(std::string_view prompt,
                                              int top_k) const {
  const int k = std::min(top_k, spec_.max_top_logprobs);
  const std::string key(prompt);
  if (const auto it = by_prompt_.find(key); it != by_prompt_.end()) {
    return script_distribution(spec_.scripts[it->second], k);
  }
  if (const auto it = by_reprompt_.find(key); it != by_reprompt_.end()) {
    AnswerDistribution dist;
    dist.greedy_completion = it->second.text;
    if (k > 0) dist.candidates.push_back({it->second.text, 0.0, 1});
    return dist;
  }
  return script_distribution(spec_.fallback, k);
}

AnswerDistribution MockBackend::complete(const CompletionRequest& request) {
  AnswerDistribution dist = mock_complete(request.prompt, request.top_k);
  dist.record_id = request.record_id;
  dist.probe_position = request.probe_position;
  return dist;
}

std::string MockBackend::describe() const { return "mock:" + source_; }

}  // namespace latent_recall
