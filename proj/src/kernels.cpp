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


#include "latent_recall/kernels.h"

#include <exception>
#include <mutex>

#include <omp.h>

#include "latent_recall/filter.h"
#include "latent_recall/metrics.h"

namespace latent_recall::kernels {
namespace {

void check_aligned(std::span<const QARecord> records,
                   std::span<const AnswerDistribution> distributions) {
  if (records.size() != distributions.size()) {
    throw InputError("kernels: records and distributions are not aligned");
  }
}

// Keeps the exception of the lowest failing index so the error reported
// does not depend on thread scheduling.
class FirstError {
 public:
  void capture(std::size_t index) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!error_ || index < index_) {
      error_ = std::current_exception();
      index_ = index;
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mu_;
  std::exception_ptr error_;
  std::size_t index_ = 0;
};

}  // namespace

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& task) {
  const auto count = static_cast<long long>(n);
  if (threads <= 1) {
    for (long long i = 0; i < count; ++i) task(static_cast<std::size_t>(i));
    return;
  }
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long long i = 0; i < count; ++i) {
    task(static_cast<std::size_t>(i));
  }
}

std::vector<std::optional<int>> hit_ranks(
    std::span<const QARecord> records,
    std::span<const AnswerDistribution> distributions,
    const MetricConfig& config) {
  check_aligned(records, distributions);
  const auto n = static_cast<long long>(records.size());
  std::vector<std::optional<int>> out(records.size());
  FirstError error;
#pragma omp parallel for schedule(dynamic, 64)
  for (long long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out[idx] = hit_rank(distributions[idx], records[idx], config);
    } catch (...) {
      error.capture(idx);
    }
  }
  error.rethrow();
  return out;
}

std::vector<std::optional<int>> hit_ranks_serial(
    std::span<const QARecord> records,
    std::span<const AnswerDistribution> distributions,
    const MetricConfig& config) {
  check_aligned(records, distributions);
  std::vector<std::optional<int>> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    out.push_back(hit_rank(distributions[i], records[i], config));
  }
  return out;
}

std::vector<EvalOutcome> greedy_outcomes(
    std::span<const QARecord> records,
    std::span<const AnswerDistribution> distributions,
    const MetricConfig& config) {
  check_aligned(records, distributions);
  const auto n = static_cast<long long>(records.size());
  std::vector<EvalOutcome> out(records.size());
  FirstError error;
#pragma omp parallel for schedule(dynamic, 64)
  for (long long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      const QARecord& record = records[idx];
      const AnswerDistribution& dist = distributions[idx];
      out[idx] = EvalOutcome{
          record.record_id,
          classify_outcome(dist.greedy_completion, record.answers, config),
          hit_rank(dist, record, config), dist.greedy_completion};
    } catch (...) {
      error.capture(idx);
    }
  }
  error.rethrow();
  return out;
}

std::vector<EvalOutcome> greedy_outcomes_serial(
    std::span<const QARecord> records,
    std::span<const AnswerDistribution> distributions,
    const MetricConfig& config) {
  check_aligned(records, distributions);
  std::vector<EvalOutcome> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const QARecord& record = records[i];
    const AnswerDistribution& dist = distributions[i];
    out.push_back(EvalOutcome{
        record.record_id,
        classify_outcome(dist.greedy_completion, record.answers, config),
        hit_rank(dist, record, config), dist.greedy_completion});
  }
  return out;
}

}  // namespace latent_recall::kernels
