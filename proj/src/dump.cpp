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


#include "latent_recall/dump.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "latent_recall/serialize.h"

namespace latent_recall {
namespace {

using nlohmann::json;

LogBase line_base(const json& doc, LogBase fallback) {
  if (!doc.contains("log_base")) return fallback;
  const json& base = doc["log_base"];
  if (base.is_string()) return parse_log_base(base.get<std::string>());
  if (base.is_number() && base.get<double>() == 10.0) return LogBase::kTen;
  throw InputError("log_base must be \"e\" or 10");
}

bool logprobs_non_increasing(const std::vector<TokenCandidate>& candidates) {
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].logprob > candidates[i - 1].logprob) return false;
  }
  return true;
}

}  // namespace

LogBase parse_log_base(std::string_view text) {
  if (text == "e" || text == "E" || text == "natural") return LogBase::kNatural;
  if (text == "10") return LogBase::kTen;
  throw InputError("unknown log base '" + std::string(text) + "' (use e or 10)");
}

double to_natural_log(double value, LogBase base) {
  return base == LogBase::kTen ? value * std::numbers::ln10 : value;
}

LogitDump parse_logit_dump(std::string_view content,
                           const DumpReadOptions& options) {
  LogitDump dump;
  std::unordered_map<std::string, std::size_t> first_line;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const std::string where = "logit dump line " + std::to_string(line_no);
    AnswerDistribution dist;
    bool reordered = false;
    try {
      const json doc = json::parse(line);
      dist = distribution_from_json(doc);
      const LogBase base = line_base(doc, options.default_base);
      for (auto& c : dist.candidates) c.logprob = to_natural_log(c.logprob, base);
      if (!is_canonical(dist.candidates)) {
        if (!logprobs_non_increasing(dist.candidates) && !options.fix_order) {
          throw InputError("candidates are not sorted by logprob descending "
                           "(pass --fix-order to re-sort)");
        }
        canonicalize_candidates(dist.candidates);
        reordered = true;
      }
    } catch (const json::exception& e) {
      throw InputError(where + ": malformed JSON: " + e.what());
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }

    const auto [it, inserted] = first_line.emplace(dist.record_id, line_no);
    if (!inserted) {
      throw InputError(where + ": record_id " + dist.record_id +
                       " duplicates line " + std::to_string(it->second));
    }
    if (reordered) {
      spdlog::warn("{}: candidates of {} re-sorted into canonical order", where,
                   dist.record_id);
      dump.reordered.push_back(dist.record_id);
    }
    dump.distributions.emplace(dist.record_id, std::move(dist));
  }
  return dump;
}

LogitDump read_logit_dump(const std::string& path,
                          const DumpReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read logit dump " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_logit_dump(buf.str(), options);
}

void write_logit_dump(std::ostream& out,
                      const std::map<std::string, AnswerDistribution>& dists) {
  for (const auto& [id, dist] : dists) out << dump_compact(to_json(dist)) << '\n';
}

AnswerDistribution distribution_from_completion_response(
    const json& response, int top_k, int probe_position, LogBase base) {
  if (!response.is_object()) throw SchemaError("response is not a JSON object");
  if (!response.contains("choices") || !response["choices"].is_array() ||
      response["choices"].empty()) {
    throw SchemaError("response has no choices");
  }
  const json& choice = response["choices"][0];
  if (!choice.is_object() || !choice.contains("text") ||
      !choice["text"].is_string()) {
    throw SchemaError("choices[0].text missing or not a string");
  }
  if (!choice.contains("logprobs") || !choice["logprobs"].is_object()) {
    throw SchemaError("choices[0].logprobs missing; the server did not return "
                      "top logprobs");
  }
  const json& logprobs = choice["logprobs"];
  if (!logprobs.contains("top_logprobs") ||
      !logprobs["top_logprobs"].is_array()) {
    throw SchemaError("choices[0].logprobs.top_logprobs missing");
  }
  const json& positions = logprobs["top_logprobs"];
  if (probe_position < 0 ||
      static_cast<std::size_t>(probe_position) >= positions.size()) {
    throw SchemaError("no top_logprobs entry at probe position " +
                      std::to_string(probe_position));
  }
  const json& entry = positions[static_cast<std::size_t>(probe_position)];
  if (!entry.is_object()) {
    throw SchemaError("top_logprobs entry is not an object of token -> logprob");
  }

  AnswerDistribution dist;
  dist.probe_position = probe_position;
  dist.greedy_completion = choice["text"].get<std::string>();
  for (const auto& [token, value] : entry.items()) {
    if (!value.is_number()) {
      throw SchemaError("top_logprobs value for '" + token + "' is not a number");
    }
    dist.candidates.push_back({token, to_natural_log(value.get<double>(), base), 0});
  }
  canonicalize_candidates(dist.candidates);
  if (top_k >= 0 && dist.candidates.size() > static_cast<std::size_t>(top_k)) {
    dist.candidates.resize(static_cast<std::size_t>(top_k));
  }
  return dist;
}

DumpBackend::DumpBackend(LogitDump dump, std::string source)
    : dump_(std::move(dump)), source_(std::move(source)) {
  min_depth_ = dump_.distributions.empty()
                   ? 0
                   : std::numeric_limits<int>::max();
  for (const auto& [id, dist] : dump_.distributions) {
    min_depth_ = std::min(min_depth_, dist.k_available());
  }
}

BackendCapabilities DumpBackend::capabilities() const {
  return {min_depth_, false};
}

AnswerDistribution DumpBackend::complete(const CompletionRequest& request) {
  if (request.reprompt) {
    throw BackendError("dump backend cannot answer re-prompts; use the http or "
                       "mock backend for recall decoding");
  }
  const auto it = dump_.distributions.find(request.record_id);
  if (it == dump_.distributions.end()) {
    throw BackendError("logit dump has no entry for record " +
                       request.record_id);
  }
  AnswerDistribution dist = it->second;
  if (request.top_k >= 0 &&
      dist.candidates.size() > static_cast<std::size_t>(request.top_k)) {
    dist.candidates.resize(static_cast<std::size_t>(request.top_k));
  }
  return dist;
}

std::string DumpBackend::describe() const { return "dump:" + source_; }

}  // namespace latent_recall
