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
#include <optional>
#include <utility>
#include <vector>

#include "latent_recall/types.h"

namespace latent_recall {

// Smallest 1-based rank whose token matches one of the record's answers.
// Throws InputError when the ids differ.
std::optional<int> hit_rank(const AnswerDistribution& dist,
                            const QARecord& record,
                            const MetricConfig& config);

struct RankObservation {
  std::optional<int> hit_rank;
  int k_available = 0;
};

// Fraction of observations with a hit at rank <= k. Rejects an empty input
// and any k deeper than an observation's candidate list.
double compute_hits_at_k(const std::vector<RankObservation>& outcomes, int k);

// (r, fraction with hit_rank <= r) for r = 1..max_rank.
std::vector<std::pair<int, double>> compute_rank_cdf(
    const std::vector<std::optional<int>>& ranks, int max_rank);

struct BucketMetrics {
  int n_records = 0;
  std::map<int, int> hit_counts;  // k -> records with a hit at rank <= k
  std::map<int, double> hits_at;
  int n_correct = 0;
  int n_wrong = 0;
  int n_uninformative = 0;
  double accuracy = 0.0;
  std::map<ResponseClass, double> response_dist;
  std::vector<std::pair<int, double>> rank_cdf;

  friend bool operator==(const BucketMetrics&, const BucketMetrics&) = default;
};

struct MetricsReport {
  std::map<Bucket, BucketMetrics> per_bucket;  // only buckets with records
  BucketMetrics overall;
  MetricConfig config_echo;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// Joins the three collections on record_id and reduces them per bucket and
// overall. Hit ranks are recomputed from the distributions; response
// classes come from the outcomes. Output does not depend on input order.
// Throws InputError on key-set mismatch, duplicates or unassigned buckets.
MetricsReport aggregate(const std::vector<QARecord>& records,
                        const std::vector<AnswerDistribution>& distributions,
                        const std::vector<EvalOutcome>& outcomes,
                        const MetricConfig& config);

}  // namespace latent_recall
