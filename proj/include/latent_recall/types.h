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

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace latent_recall {

// Base for all errors raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input files, flags, or violated preconditions. CLI exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

// Failures while talking to a model backend. CLI exit code 1.
class BackendError : public Error {
 public:
  using Error::Error;
};

// A backend response that does not follow the wire schema.
class SchemaError : public BackendError {
 public:
  using BackendError::BackendError;
};

enum class Bucket { kHead, kTorso, kTail, kUnassigned };

std::string_view to_string(Bucket bucket);
Bucket parse_bucket(std::string_view text);  // throws InputError

enum class ResponseClass { kCorrect, kWrong, kUninformative };

std::string_view to_string(ResponseClass cls);
ResponseClass parse_response_class(std::string_view text);

// One question of a QA dataset.
struct QARecord {
  std::string record_id;
  std::string question;
  std::string prompt;
  std::vector<std::string> answers;  // aliases; any of them counts
  std::string entity_id;
  double popularity = 0.0;
  Bucket bucket = Bucket::kUnassigned;

  // Throws InputError on an empty answers list, an empty alias or a
  // negative popularity.
  void validate() const;

  friend bool operator==(const QARecord&, const QARecord&) = default;
};

// A vocabulary token at the probed decoding step.
struct TokenCandidate {
  std::string token_text;  // surface form, leading whitespace preserved
  double logprob = 0.0;    // natural log
  int rank = 1;            // 1-based

  friend bool operator==(const TokenCandidate&, const TokenCandidate&) = default;
};

// Candidate order: logprob descending, then token_text ascending by bytes.
bool candidate_before(const TokenCandidate& a, const TokenCandidate& b);

// Sorts by candidate_before and rewrites ranks to 1..n.
void canonicalize_candidates(std::vector<TokenCandidate>& candidates);

// True when the list is in canonical order with ranks 1..n.
bool is_canonical(const std::vector<TokenCandidate>& candidates);

// The top-k candidates observed for one record.
struct AnswerDistribution {
  std::string record_id;
  int probe_position = 0;
  std::vector<TokenCandidate> candidates;
  std::string greedy_completion;

  int k_available() const { return static_cast<int>(candidates.size()); }

  friend bool operator==(const AnswerDistribution&,
                         const AnswerDistribution&) = default;
};

struct EvalOutcome {
  std::string record_id;
  ResponseClass response_class = ResponseClass::kWrong;
  std::optional<int> hit_rank;
  std::string final_answer;

  friend bool operator==(const EvalOutcome&, const EvalOutcome&) = default;
};

// Parameters of the response repetition heuristic. A response is
// repetitive when some unit of 1..max_period characters repeats back to
// back at least min_repeats times and that block covers at least
// min_coverage_percent of the response.
struct RepetitionRule {
  int max_period = 8;
  int min_repeats = 4;
  int min_coverage_percent = 80;

  friend bool operator==(const RepetitionRule&, const RepetitionRule&) = default;
};

struct MetricConfig {
  std::vector<int> k_values = {1, 5, 50, 100};
  int min_match_len = 3;
  std::vector<std::string> uninformative_prefixes = {"uns"};
  int min_token_len = 3;
  std::set<std::string> stopwords;
  double head_fraction = 0.10;
  double torso_fraction = 0.40;
  RepetitionRule repetition;

  // Config with the built-in English stop-word list.
  static MetricConfig defaults();

  int max_k() const { return k_values.empty() ? 0 : k_values.back(); }

  // Throws InputError when an invariant does not hold.
  void validate() const;

  friend bool operator==(const MetricConfig&, const MetricConfig&) = default;
};

// Options that shape the backend queries.
struct DecodeOptions {
  int top_k = 100;
  int max_tokens = 32;
  int probe_position = 0;
  bool always_recover = false;
};

}  // namespace latent_recall
