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


#include "latent_recall/metrics.h"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "latent_recall/kernels.h"
#include "latent_recall/matcher.h"

namespace latent_recall {
namespace {

BucketMetrics reduce(const std::vector<std::optional<int>>& ranks,
                     const std::vector<int>& k_available,
                     const std::vector<ResponseClass>& classes,
                     const MetricConfig& config) {
  BucketMetrics m;
  m.n_records = static_cast<int>(ranks.size());
  std::vector<RankObservation> observations;
  observations.reserve(ranks.size());
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    observations.push_back({ranks[i], k_available[i]});
  }
  for (int k : config.k_values) {
    const double hits = compute_hits_at_k(observations, k);
    m.hits_at[k] = hits;
    m.hit_counts[k] = static_cast<int>(
        std::count_if(ranks.begin(), ranks.end(),
                      [k](const auto& r) { return r && *r <= k; }));
  }
  for (ResponseClass cls : classes) {
    switch (cls) {
      case ResponseClass::kCorrect:
        ++m.n_correct;
        break;
      case ResponseClass::kWrong:
        ++m.n_wrong;
        break;
      case ResponseClass::kUninformative:
        ++m.n_uninformative;
        break;
    }
  }
  const double n = m.n_records;
  m.accuracy = m.n_correct / n;
  m.response_dist[ResponseClass::kCorrect] = m.n_correct / n;
  m.response_dist[ResponseClass::kWrong] = m.n_wrong / n;
  m.response_dist[ResponseClass::kUninformative] = m.n_uninformative / n;
  m.rank_cdf = compute_rank_cdf(ranks, config.max_k());
  return m;
}

}  // namespace

std::optional<int> hit_rank(const AnswerDistribution& dist,
                            const QARecord& record,
                            const MetricConfig& config) {
  if (dist.record_id != record.record_id) {
    throw InputError("hit_rank: distribution " + dist.record_id +
                     " does not belong to record " + record.record_id);
  }
  for (std::size_t i = 0; i < dist.candidates.size(); ++i) {
    if (token_matches(dist.candidates[i].token_text, record.answers,
                      config.min_match_len)
            .matched) {
      return static_cast<int>(i) + 1;
    }
  }
  return std::nullopt;
}

double compute_hits_at_k(const std::vector<RankObservation>& outcomes, int k) {
  if (outcomes.empty()) throw InputError("compute_hits_at_k: no outcomes");
  if (k < 1) throw InputError("compute_hits_at_k: k must be positive");
  std::size_t hits = 0;
  for (const auto& o : outcomes) {
    if (k > o.k_available) {
      throw InputError("Hits@" + std::to_string(k) +
                       " is undefined: a record has only " +
                       std::to_string(o.k_available) + " candidates");
    }
    if (o.hit_rank && *o.hit_rank <= k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

std::vector<std::pair<int, double>> compute_rank_cdf(
    const std::vector<std::optional<int>>& ranks, int max_rank) {
  if (ranks.empty()) throw InputError("compute_rank_cdf: no outcomes");
  if (max_rank < 1) throw InputError("compute_rank_cdf: max_rank must be >= 1");
  std::vector<std::size_t> at_rank(static_cast<std::size_t>(max_rank) + 1, 0);
  for (const auto& r : ranks) {
    if (r && *r >= 1 && *r <= max_rank) ++at_rank[static_cast<std::size_t>(*r)];
  }
  std::vector<std::pair<int, double>> cdf;
  cdf.reserve(static_cast<std::size_t>(max_rank));
  std::size_t cumulative = 0;
  const auto n = static_cast<double>(ranks.size());
  for (int r = 1; r <= max_rank; ++r) {
    cumulative += at_rank[static_cast<std::size_t>(r)];
    cdf.emplace_back(r, static_cast<double>(cumulative) / n);
  }
  return cdf;
}

MetricsReport aggregate(const std::vector<QARecord>& records,
                        const std::vector<AnswerDistribution>& distributions,
                        const std::vector<EvalOutcome>& outcomes,
                        const MetricConfig& config) {
  config.validate();
  if (records.empty()) throw InputError("aggregate: no records");
  if (distributions.size() != records.size() ||
      outcomes.size() != records.size()) {
    throw InputError("aggregate: records, distributions and outcomes differ "
                     "in size");
  }

  std::vector<const QARecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) {
    if (r.bucket == Bucket::kUnassigned) {
      throw InputError("record " + r.record_id +
                       " has no bucket; partition the dataset first");
    }
    sorted.push_back(&r);
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->record_id < b->record_id;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->record_id == sorted[i - 1]->record_id) {
      throw InputError("aggregate: duplicate record_id " + sorted[i]->record_id);
    }
  }

  std::unordered_map<std::string, const AnswerDistribution*> dist_by_id;
  for (const auto& d : distributions) {
    if (!dist_by_id.emplace(d.record_id, &d).second) {
      throw InputError("aggregate: duplicate distribution for " + d.record_id);
    }
  }
  std::unordered_map<std::string, const EvalOutcome*> outcome_by_id;
  for (const auto& o : outcomes) {
    if (!outcome_by_id.emplace(o.record_id, &o).second) {
      throw InputError("aggregate: duplicate outcome for " + o.record_id);
    }
  }

  std::vector<QARecord> aligned_records;
  std::vector<AnswerDistribution> aligned_dists;
  std::vector<ResponseClass> classes;
  aligned_records.reserve(sorted.size());
  aligned_dists.reserve(sorted.size());
  classes.reserve(sorted.size());
  for (const auto* r : sorted) {
    const auto d = dist_by_id.find(r->record_id);
    const auto o = outcome_by_id.find(r->record_id);
    if (d == dist_by_id.end() || o == outcome_by_id.end()) {
      throw InputError("aggregate: key sets differ at record " + r->record_id);
    }
    aligned_records.push_back(*r);
    aligned_dists.push_back(*d->second);
    classes.push_back(o->second->response_class);
  }

  const std::vector<std::optional<int>> ranks =
      kernels::hit_ranks(aligned_records, aligned_dists, config);

  MetricsReport report;
  report.config_echo = config;

  std::map<Bucket, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < aligned_records.size(); ++i) {
    members[aligned_records[i].bucket].push_back(i);
  }
  for (const auto& [bucket, idx] : members) {
    std::vector<std::optional<int>> r;
    std::vector<int> depth;
    std::vector<ResponseClass> c;
    for (std::size_t i : idx) {
      r.push_back(ranks[i]);
      depth.push_back(aligned_dists[i].k_available());
      c.push_back(classes[i]);
    }
    report.per_bucket[bucket] = reduce(r, depth, c, config);
  }

  std::vector<int> depth;
  depth.reserve(aligned_dists.size());
  for (const auto& d : aligned_dists) depth.push_back(d.k_available());
  report.overall = reduce(ranks, depth, classes, config);
  return report;
}

}  // namespace latent_recall
