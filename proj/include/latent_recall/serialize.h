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

#include <string>

#include <json.hpp>

#include "latent_recall/filter.h"
#include "latent_recall/metrics.h"
#include "latent_recall/recall.h"
#include "latent_recall/types.h"

// JSON forms of the domain types. Objects use nlohmann::ordered_json so the
// field order is fixed and dumps are byte-stable.
namespace latent_recall {

using Json = nlohmann::ordered_json;

Json to_json(const QARecord& record);
QARecord record_from_json(const nlohmann::json& doc);  // throws InputError

Json to_json(const TokenCandidate& candidate);
TokenCandidate candidate_from_json(const nlohmann::json& doc);

Json to_json(const AnswerDistribution& dist);
AnswerDistribution distribution_from_json(const nlohmann::json& doc);

Json to_json(const EvalOutcome& outcome);
EvalOutcome outcome_from_json(const nlohmann::json& doc);

Json to_json(const MetricConfig& config);
MetricConfig config_from_json(const nlohmann::json& doc);

Json to_json(const FilterVerdict& verdict);

Json to_json(const RecallTrace& trace);
RecallTrace trace_from_json(const nlohmann::json& doc);

Json to_json(const BucketMetrics& metrics);
Json to_json(const MetricsReport& report);

// Compact single-line dump; invalid UTF-8 in strings becomes U+FFFD.
std::string dump_compact(const Json& doc);

// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

}  // namespace latent_recall
