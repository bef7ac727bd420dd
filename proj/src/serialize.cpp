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


#include "latent_recall/serialize.h"

#include <array>
#include <charconv>
#include <string>

namespace latent_recall {
namespace {

using nlohmann::json;

const json& field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) {
    throw InputError(std::string("missing required field '") + name + "'");
  }
  return doc[name];
}

std::string string_field(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_string()) {
    throw InputError(std::string("field '") + name + "' must be a string");
  }
  return v.get<std::string>();
}

double number_field(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_number()) {
    throw InputError(std::string("field '") + name + "' must be a number");
  }
  return v.get<double>();
}

int int_field(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_number_integer()) {
    throw InputError(std::string("field '") + name + "' must be an integer");
  }
  return v.get<int>();
}

bool bool_field(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_boolean()) {
    throw InputError(std::string("field '") + name + "' must be a boolean");
  }
  return v.get<bool>();
}

std::vector<std::string> string_array(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_array()) {
    throw InputError(std::string("field '") + name + "' must be an array");
  }
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) {
      throw InputError(std::string("field '") + name +
                       "' must contain only strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

Json skipped_json(const SkippedToken& s) {
  Json doc = to_json(s.candidate);
  doc["reason"] = to_string(s.verdict.reason);
  return doc;
}

}  // namespace

std::string dump_compact(const Json& doc) {
  return doc.dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), end);
}

Json to_json(const QARecord& r) {
  Json doc;
  doc["record_id"] = r.record_id;
  doc["question"] = r.question;
  doc["prompt"] = r.prompt;
  doc["answers"] = r.answers;
  doc["entity_id"] = r.entity_id;
  doc["popularity"] = r.popularity;
  doc["bucket"] = to_string(r.bucket);
  return doc;
}

QARecord record_from_json(const json& doc) {
  if (!doc.is_object()) throw InputError("record must be a JSON object");
  QARecord r;
  r.record_id = string_field(doc, "record_id");
  r.question = string_field(doc, "question");
  r.prompt = string_field(doc, "prompt");
  r.answers = string_array(doc, "answers");
  r.entity_id = string_field(doc, "entity_id");
  r.popularity = number_field(doc, "popularity");
  if (doc.contains("bucket")) r.bucket = parse_bucket(string_field(doc, "bucket"));
  r.validate();
  return r;
}

Json to_json(const TokenCandidate& c) {
  Json doc;
  doc["token"] = c.token_text;
  doc["logprob"] = c.logprob;
  doc["rank"] = c.rank;
  return doc;
}

TokenCandidate candidate_from_json(const json& doc) {
  TokenCandidate c;
  c.token_text = string_field(doc, "token");
  c.logprob = number_field(doc, "logprob");
  c.rank = doc.contains("rank") ? int_field(doc, "rank") : 1;
  if (c.rank < 1) throw InputError("candidate rank must be >= 1");
  return c;
}

Json to_json(const AnswerDistribution& d) {
  Json doc;
  doc["record_id"] = d.record_id;
  doc["probe_position"] = d.probe_position;
  doc["greedy_completion"] = d.greedy_completion;
  Json cands = Json::array();
  for (const auto& c : d.candidates) {
    Json item;
    item["token"] = c.token_text;
    item["logprob"] = c.logprob;
    cands.push_back(std::move(item));
  }
  doc["candidates"] = std::move(cands);
  return doc;
}

AnswerDistribution distribution_from_json(const json& doc) {
  if (!doc.is_object()) throw InputError("distribution must be a JSON object");
  AnswerDistribution d;
  d.record_id = string_field(doc, "record_id");
  d.probe_position = doc.contains("probe_position")
                         ? int_field(doc, "probe_position")
                         : 0;
  if (d.probe_position < 0) throw InputError("probe_position must be >= 0");
  d.greedy_completion = string_field(doc, "greedy_completion");
  const json& cands = field(doc, "candidates");
  if (!cands.is_array()) throw InputError("field 'candidates' must be an array");
  for (const auto& item : cands) {
    TokenCandidate c;
    c.token_text = string_field(item, "token");
    c.logprob = number_field(item, "logprob");
    c.rank = static_cast<int>(d.candidates.size()) + 1;
    d.candidates.push_back(std::move(c));
  }
  return d;
}

Json to_json(const EvalOutcome& o) {
  Json doc;
  doc["record_id"] = o.record_id;
  doc["response_class"] = to_string(o.response_class);
  doc["hit_rank"] = o.hit_rank ? Json(*o.hit_rank) : Json(nullptr);
  doc["final_answer"] = o.final_answer;
  return doc;
}

EvalOutcome outcome_from_json(const json& doc) {
  EvalOutcome o;
  o.record_id = string_field(doc, "record_id");
  o.response_class = parse_response_class(string_field(doc, "response_class"));
  if (!field(doc, "hit_rank").is_null()) o.hit_rank = int_field(doc, "hit_rank");
  o.final_answer = string_field(doc, "final_answer");
  return o;
}

Json to_json(const MetricConfig& c) {
  Json doc;
  doc["k_values"] = c.k_values;
  doc["min_match_len"] = c.min_match_len;
  doc["uninformative_prefixes"] = c.uninformative_prefixes;
  doc["min_token_len"] = c.min_token_len;
  doc["stopwords"] = std::vector<std::string>(c.stopwords.begin(), c.stopwords.end());
  doc["head_fraction"] = c.head_fraction;
  doc["torso_fraction"] = c.torso_fraction;
  Json rep;
  rep["max_period"] = c.repetition.max_period;
  rep["min_repeats"] = c.repetition.min_repeats;
  rep["min_coverage_percent"] = c.repetition.min_coverage_percent;
  doc["repetition"] = std::move(rep);
  return doc;
}

MetricConfig config_from_json(const json& doc) {
  MetricConfig c;
  const json& ks = field(doc, "k_values");
  if (!ks.is_array()) throw InputError("k_values must be an array");
  c.k_values.clear();
  for (const auto& k : ks) {
    if (!k.is_number_integer()) throw InputError("k_values must be integers");
    c.k_values.push_back(k.get<int>());
  }
  c.min_match_len = int_field(doc, "min_match_len");
  c.uninformative_prefixes = string_array(doc, "uninformative_prefixes");
  c.min_token_len = int_field(doc, "min_token_len");
  const auto words = string_array(doc, "stopwords");
  c.stopwords = std::set<std::string>(words.begin(), words.end());
  c.head_fraction = number_field(doc, "head_fraction");
  c.torso_fraction = number_field(doc, "torso_fraction");
  const json& rep = field(doc, "repetition");
  c.repetition.max_period = int_field(rep, "max_period");
  c.repetition.min_repeats = int_field(rep, "min_repeats");
  c.repetition.min_coverage_percent = int_field(rep, "min_coverage_percent");
  c.validate();
  return c;
}

Json to_json(const FilterVerdict& v) {
  Json doc;
  doc["uninformative"] = v.uninformative;
  doc["reason"] = to_string(v.reason);
  return doc;
}

Json to_json(const RecallTrace& t) {
  Json doc;
  doc["record_id"] = t.record_id;
  Json skipped = Json::array();
  for (const auto& s : t.skipped) skipped.push_back(skipped_json(s));
  doc["skipped"] = std::move(skipped);
  doc["selected"] = t.selected ? to_json(*t.selected) : Json(nullptr);
  doc["new_prompt"] = t.new_prompt;
  doc["new_completion"] = t.new_completion ? Json(*t.new_completion) : Json(nullptr);
  doc["fallback_used"] = t.fallback_used;
  return doc;
}

RecallTrace trace_from_json(const json& doc) {
  RecallTrace t;
  t.record_id = string_field(doc, "record_id");
  const json& skipped = field(doc, "skipped");
  if (!skipped.is_array()) throw InputError("field 'skipped' must be an array");
  for (const auto& s : skipped) {
    const FilterReason reason = parse_filter_reason(string_field(s, "reason"));
    t.skipped.push_back(
        {candidate_from_json(s), {reason != FilterReason::kNone, reason}});
  }
  if (!field(doc, "selected").is_null()) {
    t.selected = candidate_from_json(doc["selected"]);
  }
  t.new_prompt = string_field(doc, "new_prompt");
  if (!field(doc, "new_completion").is_null()) {
    t.new_completion = string_field(doc, "new_completion");
  }
  t.fallback_used = bool_field(doc, "fallback_used");
  return t;
}

Json to_json(const BucketMetrics& m) {
  Json doc;
  doc["n_records"] = m.n_records;
  Json hits;
  Json counts;
  for (const auto& [k, v] : m.hits_at) hits[std::to_string(k)] = v;
  for (const auto& [k, v] : m.hit_counts) counts[std::to_string(k)] = v;
  doc["hits_at"] = std::move(hits);
  doc["hit_counts"] = std::move(counts);
  doc["accuracy"] = m.accuracy;
  Json response_counts;
  response_counts["correct"] = m.n_correct;
  response_counts["wrong"] = m.n_wrong;
  response_counts["uninformative"] = m.n_uninformative;
  doc["response_counts"] = std::move(response_counts);
  Json dist;
  for (const auto& [cls, v] : m.response_dist) dist[std::string(to_string(cls))] = v;
  doc["response_dist"] = std::move(dist);
  Json cdf = Json::array();
  for (const auto& [rank, frac] : m.rank_cdf) cdf.push_back(Json::array({rank, frac}));
  doc["rank_cdf"] = std::move(cdf);
  return doc;
}

Json to_json(const MetricsReport& report) {
  Json doc;
  doc["config"] = to_json(report.config_echo);
  doc["overall"] = to_json(report.overall);
  Json buckets = Json::object();
  for (const auto& [bucket, m] : report.per_bucket) {
    buckets[std::string(to_string(bucket))] = to_json(m);
  }
  doc["per_bucket"] = std::move(buckets);
  return doc;
}

}  // namespace latent_recall
