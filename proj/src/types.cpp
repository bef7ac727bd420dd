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


#include "latent_recall/types.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "latent_recall/text.h"

namespace latent_recall {

std::string_view to_string(Bucket bucket) {
  switch (bucket) {
    case Bucket::kHead:
      return "head";
    case Bucket::kTorso:
      return "torso";
    case Bucket::kTail:
      return "tail";
    case Bucket::kUnassigned:
      return "unassigned";
  }
  return "unassigned";
}

Bucket parse_bucket(std::string_view text) {
  if (text == "head") return Bucket::kHead;
  if (text == "torso") return Bucket::kTorso;
  if (text == "tail") return Bucket::kTail;
  if (text == "unassigned" || text.empty()) return Bucket::kUnassigned;
  throw InputError("unknown bucket '" + std::string(text) + "'");
}

std::string_view to_string(ResponseClass cls) {
  switch (cls) {
    case ResponseClass::kCorrect:
      return "correct";
    case ResponseClass::kWrong:
      return "wrong";
    case ResponseClass::kUninformative:
      return "uninformative";
  }
  return "wrong";
}

ResponseClass parse_response_class(std::string_view text) {
  if (text == "correct") return ResponseClass::kCorrect;
  if (text == "wrong") return ResponseClass::kWrong;
  if (text == "uninformative") return ResponseClass::kUninformative;
  throw InputError("unknown response class '" + std::string(text) + "'");
}

void QARecord::validate() const {
  if (record_id.empty()) throw InputError("record has an empty record_id");
  if (answers.empty()) {
    throw InputError("record " + record_id + " has no answers");
  }
  for (const auto& alias : answers) {
    if (alias.empty()) {
      throw InputError("record " + record_id + " has an empty answer alias");
    }
  }
  if (!(popularity >= 0.0) || !std::isfinite(popularity)) {
    throw InputError("record " + record_id +
                     " has a negative or non-finite popularity");
  }
}

bool candidate_before(const TokenCandidate& a, const TokenCandidate& b) {
  if (a.logprob != b.logprob) return a.logprob > b.logprob;
  return a.token_text < b.token_text;
}

void canonicalize_candidates(std::vector<TokenCandidate>& candidates) {
  std::stable_sort(candidates.begin(), candidates.end(), candidate_before);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    candidates[i].rank = static_cast<int>(i) + 1;
  }
}

bool is_canonical(const std::vector<TokenCandidate>& candidates) {
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].rank != static_cast<int>(i) + 1) return false;
    if (i > 0 && candidate_before(candidates[i], candidates[i - 1])) {
      return false;
    }
  }
  return true;
}

MetricConfig MetricConfig::defaults() {
  MetricConfig config;
  config.stopwords = default_stopwords();
  return config;
}

void MetricConfig::validate() const {
  if (k_values.empty()) throw InputError("k list is empty");
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    if (k_values[i] < 1) throw InputError("k values must be positive");
    if (i > 0 && k_values[i] <= k_values[i - 1]) {
      throw InputError("k values must be strictly increasing");
    }
  }
  if (min_match_len < 1) throw InputError("min_match_len must be >= 1");
  if (min_token_len < 1) throw InputError("min_token_len must be >= 1");
  if (!(head_fraction > 0.0 && head_fraction <= 1.0)) {
    throw InputError("head fraction must lie in (0, 1]");
  }
  if (!(torso_fraction >= 0.0 && torso_fraction < 1.0)) {
    throw InputError("torso fraction must lie in [0, 1)");
  }
  if (head_fraction + torso_fraction > 1.0 + 1e-12) {
    throw InputError("head + torso fractions exceed 1");
  }
  if (repetition.max_period < 1 || repetition.min_repeats < 2 ||
      repetition.min_coverage_percent < 0 ||
      repetition.min_coverage_percent > 100) {
    throw InputError("invalid repetition rule");
  }
}

}  // namespace latent_recall
