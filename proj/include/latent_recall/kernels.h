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

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "latent_recall/types.h"

// Per-record scoring kernels. Each has an OpenMP version and a serial
// reference that tests and the benchmark compare it against. Inputs are
// aligned: records[i] belongs with distributions[i].
namespace latent_recall::kernels {

std::vector<std::optional<int>> hit_ranks(
    std::span<const QARecord> records,
    std::span<const AnswerDistribution> distributions,
    const MetricConfig& config);

std::vector<std::optional<int>> hit_ranks_serial(
    std::span<const QARecord> records,
    std::span<const AnswerDistribution> distributions,
    const MetricConfig& config);

// Baseline outcome of each record from its greedy completion.
std::vector<EvalOutcome> greedy_outcomes(
    std::span<const QARecord> records,
    std::span<const AnswerDistribution> distributions,
    const MetricConfig& config);

std::vector<EvalOutcome> greedy_outcomes_serial(
    std::span<const QARecord> records,
    std::span<const AnswerDistribution> distributions,
    const MetricConfig& config);

// Runs task(i) for i in [0, n) on up to `threads` OpenMP threads with
// dynamic scheduling. The task must not throw.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& task);

}  // namespace latent_recall::kernels
