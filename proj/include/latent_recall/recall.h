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
#include <string>
#include <utility>
#include <vector>

#include "latent_recall/backend.h"
#include "latent_recall/filter.h"
#include "latent_recall/metrics.h"
#include "latent_recall/types.h"

namespace latent_recall {

struct SkippedToken {
  TokenCandidate candidate;
  FilterVerdict verdict;

  friend bool operator==(const SkippedToken&, const SkippedToken&) = default;
};

struct RecoverySelection {
  std::optional<TokenCandidate> selected;
  std::vector<SkippedToken> skipped;

  friend bool operator==(const RecoverySelection&,
                         const RecoverySelection&) = default;
};

// Audit record of one recall decode.
struct RecallTrace {
  std::string record_id;
  std::vector<SkippedToken> skipped;
  std::optional<TokenCandidate> selected;
  std::string new_prompt;  // the original prompt when nothing was selected
  std::optional<std::string> new_completion;
  bool fallback_used = false;

  friend bool operator==(const RecallTrace&, const RecallTrace&) = default;
};

// Walks the rank-ordered candidates, deleting uninformative ones, and
// returns the first informative candidate. Throws InputError when the list
// is empty.
RecoverySelection select_recovery_token(const AnswerDistribution& dist,
                                        const MetricConfig& config);

struct RecallResult {
  EvalOutcome outcome;
  RecallTrace trace;
  int backend_calls = 0;
};

// Recovery step given the first-round distribution. Issues the second
// query when the greedy completion is uninformative (or always when
// options.always_recover is set) and an informative candidate exists.
RecallResult recall_from_distribution(const QARecord& record,
                                      const AnswerDistribution& first,
                                      LMBackend& backend,
                                      const MetricConfig& config,
                                      const DecodeOptions& options);

// Both queries. Backend failures are rethrown as BackendError carrying the
// record id.
RecallResult recall_decode(const QARecord& record, LMBackend& backend,
                           const MetricConfig& config,
                           const DecodeOptions& options);

// First-round query for one record with the record id filled in.
AnswerDistribution query_distribution(const QARecord& record,
                                      LMBackend& backend,
                                      const DecodeOptions& options);

struct RecordFailure {
  std::string record_id;
  std::string message;
};

struct EvaluationRun {
  std::vector<QARecord> records;  // successfully queried, sorted by id
  std::vector<AnswerDistribution> distributions;
  std::vector<EvalOutcome> outcomes;
  std::vector<RecordFailure> failures;
  std::optional<MetricsReport> report;  // absent when every record failed
};

// Greedy evaluation: one query per record, `concurrency` in flight. A
// record whose candidate list is shorter than the largest k is a failure.
EvaluationRun evaluate_records(const std::vector<QARecord>& records,
                               LMBackend& backend, const MetricConfig& config,
                               const DecodeOptions& options, int concurrency);

struct BatchRecallResult {
  std::vector<QARecord> records;  // successful, sorted by id
  std::vector<AnswerDistribution> distributions;
  std::vector<EvalOutcome> baseline;
  std::vector<RecallResult> recalled;
  std::vector<RecordFailure> failures;
  std::optional<MetricsReport> before;
  std::optional<MetricsReport> after;
  int second_queries = 0;
};

// Baseline and recall-decoded reports from one pass, at most two backend
// calls per record. Failed records are listed and left out of both reports.
BatchRecallResult batch_recall(const std::vector<QARecord>& records,
                               LMBackend& backend, const MetricConfig& config,
                               const DecodeOptions& options, int concurrency);

}  // namespace latent_recall
