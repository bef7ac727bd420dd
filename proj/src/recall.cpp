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


#include "latent_recall/recall.h"

#include <algorithm>
#include <numeric>

#include "latent_recall/kernels.h"

namespace latent_recall {
namespace {

std::vector<std::size_t> order_by_id(const std::vector<QARecord>& records,
                                     const std::vector<char>& ok) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (ok[i]) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].record_id < records[b].record_id;
  });
  return order;
}

void sort_failures(std::vector<RecordFailure>& failures) {
  std::sort(failures.begin(), failures.end(),
            [](const auto& a, const auto& b) { return a.record_id < b.record_id; });
}

}  // namespace

RecoverySelection select_recovery_token(const AnswerDistribution& dist,
                                        const MetricConfig& config) {
  if (dist.candidates.empty()) {
    throw InputError("select_recovery_token: record " + dist.record_id +
                     " has no candidates");
  }
  RecoverySelection selection;
  std::size_t i = 0;
  while (i < dist.candidates.size()) {
    const TokenCandidate& candidate = dist.candidates[i];
    const FilterVerdict verdict =
        is_uninformative_token(candidate.token_text, config);
    if (!verdict.uninformative) break;
    selection.skipped.push_back({candidate, verdict});
    ++i;
  }
  if (i < dist.candidates.size()) selection.selected = dist.candidates[i];
  return selection;
}

AnswerDistribution query_distribution(const QARecord& record,
                                      LMBackend& backend,
                                      const DecodeOptions& options) {
  CompletionRequest request{record.record_id, record.prompt, options.top_k,
                            options.max_tokens, options.probe_position, false};
  try {
    AnswerDistribution dist = backend.complete(request);
    dist.record_id = record.record_id;
    return dist;
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw BackendError("record " + record.record_id + ": " + e.what());
  }
}

namespace {

// A record whose list is shorter than the deepest k cannot be scored.
AnswerDistribution query_scorable(const QARecord& record, LMBackend& backend,
                                  const MetricConfig& config,
                                  const DecodeOptions& options) {
  AnswerDistribution dist = query_distribution(record, backend, options);
  if (dist.k_available() < config.max_k()) {
    throw BackendError("record " + record.record_id + ": backend returned " +
                       std::to_string(dist.k_available()) +
                       " candidates, k up to " + std::to_string(config.max_k()) +
                       " needs that many");
  }
  return dist;
}

}  // namespace

RecallResult recall_from_distribution(const QARecord& record,
                                      const AnswerDistribution& first,
                                      LMBackend& backend,
                                      const MetricConfig& config,
                                      const DecodeOptions& options) {
  if (first.candidates.empty()) {
    throw BackendError("record " + record.record_id +
                       ": backend returned zero candidates");
  }
  RecallResult result;
  result.trace.record_id = record.record_id;
  result.trace.new_prompt = record.prompt;

  std::string final_answer = first.greedy_completion;
  const bool recover =
      options.always_recover ||
      classify_response(first.greedy_completion, config) ==
          ResponseKind::kUninformative;
  if (recover) {
    RecoverySelection selection = select_recovery_token(first, config);
    result.trace.skipped = std::move(selection.skipped);
    result.trace.selected = selection.selected;
    if (selection.selected) {
      const std::string& token = selection.selected->token_text;
      result.trace.new_prompt = record.prompt + token;
      CompletionRequest request{record.record_id, result.trace.new_prompt,
                                options.top_k,    options.max_tokens,
                                options.probe_position, true};
      AnswerDistribution second;
      try {
        second = backend.complete(request);
      } catch (const std::exception& e) {
        throw BackendError("record " + record.record_id +
                           " (recovery query): " + e.what());
      }
      result.backend_calls = 1;
      result.trace.new_completion = second.greedy_completion;
      final_answer = token + second.greedy_completion;
    } else {
      result.trace.fallback_used = true;
    }
  }

  result.outcome.record_id = record.record_id;
  result.outcome.final_answer = final_answer;
  result.outcome.response_class =
      classify_outcome(final_answer, record.answers, config);
  result.outcome.hit_rank = hit_rank(first, record, config);
  return result;
}

RecallResult recall_decode(const QARecord& record, LMBackend& backend,
                           const MetricConfig& config,
                           const DecodeOptions& options) {
  const AnswerDistribution first = query_distribution(record, backend, options);
  RecallResult result =
      recall_from_distribution(record, first, backend, config, options);
  result.backend_calls += 1;
  return result;
}

EvaluationRun evaluate_records(const std::vector<QARecord>& records,
                               LMBackend& backend, const MetricConfig& config,
                               const DecodeOptions& options, int concurrency) {
  config.validate();
  std::vector<AnswerDistribution> dists(records.size());
  std::vector<char> ok(records.size(), 0);  // not vector<bool>: written concurrently
  std::vector<std::string> errors(records.size());

  kernels::parallel_for(records.size(), concurrency, [&](std::size_t i) {
    try {
      dists[i] = query_scorable(records[i], backend, config, options);
      ok[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  EvaluationRun run;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!ok[i]) run.failures.push_back({records[i].record_id, errors[i]});
  }
  sort_failures(run.failures);
  for (std::size_t i : order_by_id(records, ok)) {
    run.records.push_back(records[i]);
    run.distributions.push_back(std::move(dists[i]));
  }
  if (run.records.empty()) return run;
  run.outcomes =
      kernels::greedy_outcomes(run.records, run.distributions, config);
  run.report = aggregate(run.records, run.distributions, run.outcomes, config);
  return run;
}

BatchRecallResult batch_recall(const std::vector<QARecord>& records,
                               LMBackend& backend, const MetricConfig& config,
                               const DecodeOptions& options, int concurrency) {
  config.validate();
  std::vector<AnswerDistribution> dists(records.size());
  std::vector<RecallResult> recalled(records.size());
  std::vector<char> ok(records.size(), 0);  // not vector<bool>: written concurrently
  std::vector<std::string> errors(records.size());

  kernels::parallel_for(records.size(), concurrency, [&](std::size_t i) {
    try {
      dists[i] = query_scorable(records[i], backend, config, options);
      recalled[i] =
          recall_from_distribution(records[i], dists[i], backend, config, options);
      recalled[i].backend_calls += 1;
      ok[i] = 1;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  BatchRecallResult out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!ok[i]) out.failures.push_back({records[i].record_id, errors[i]});
  }
  sort_failures(out.failures);
  for (std::size_t i : order_by_id(records, ok)) {
    out.records.push_back(records[i]);
    out.distributions.push_back(std::move(dists[i]));
    out.second_queries += recalled[i].backend_calls - 1;
    out.recalled.push_back(std::move(recalled[i]));
  }
  if (out.records.empty()) return out;

  out.baseline =
      kernels::greedy_outcomes(out.records, out.distributions, config);
  std::vector<EvalOutcome> after;
  after.reserve(out.recalled.size());
  for (const auto& r : out.recalled) after.push_back(r.outcome);
  out.before = aggregate(out.records, out.distributions, out.baseline, config);
  out.after = aggregate(out.records, out.distributions, after, config);
  return out;
}

}  // namespace latent_recall
