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
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "latent_recall/backend.h"

namespace latent_recall {

enum class LogBase { kNatural, kTen };

LogBase parse_log_base(std::string_view text);  // "e" or "10"
double to_natural_log(double value, LogBase base);

struct DumpReadOptions {
  bool fix_order = false;
  // Applies when a line has no "log_base" field.
  LogBase default_base = LogBase::kNatural;
};

struct LogitDump {
  std::map<std::string, AnswerDistribution> distributions;
  std::vector<std::string> reordered;  // record ids re-sorted on load
};

// Parses the logit-dump JSONL format. Candidates that are not sorted by
// logprob descending are rejected unless fix_order is set.
LogitDump parse_logit_dump(std::string_view content,
                           const DumpReadOptions& options = {});
LogitDump read_logit_dump(const std::string& path,
                          const DumpReadOptions& options = {});

// One canonical line per distribution, sorted by record_id.
void write_logit_dump(std::ostream& out,
                      const std::map<std::string, AnswerDistribution>& dists);

// Extracts an AnswerDistribution from an OpenAI-style completion response
// (the object with "choices"). Throws SchemaError on violations.
AnswerDistribution distribution_from_completion_response(
    const nlohmann::json& response, int top_k, int probe_position,
    LogBase base = LogBase::kNatural);

// Serves distributions from a dump. Re-prompts cannot be answered.
class DumpBackend final : public LMBackend {
 public:
  DumpBackend(LogitDump dump, std::string source);

  BackendCapabilities capabilities() const override;
  AnswerDistribution complete(const CompletionRequest& request) override;
  std::string describe() const override;

 private:
  LogitDump dump_;
  std::string source_;
  int min_depth_ = 0;
};

}  // namespace latent_recall
