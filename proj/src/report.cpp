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


#include "latent_recall/report.h"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iomanip>

#include <openssl/evp.h>

#ifndef LATENT_RECALL_VERSION
#define LATENT_RECALL_VERSION "dev"
#endif

namespace latent_recall {
namespace {

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", fraction * 100.0);
  return buf;
}

// Present buckets in head, torso, tail order followed by "overall".
template <typename Fn>
void for_each_section(const MetricsReport& report, Fn fn) {
  for (const auto& [bucket, m] : report.per_bucket) fn(to_string(bucket), m);
  fn("overall", report.overall);
}

Json failures_json(const std::vector<RecordFailure>& failures) {
  Json out = Json::array();
  for (const auto& f : failures) {
    Json item;
    item["record_id"] = f.record_id;
    item["error"] = f.message;
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string tool_version() { return LATENT_RECALL_VERSION; }

std::string current_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json manifest_data_json(const RunManifest& m) {
  Json doc;
  doc["tool_version"] = m.tool_version;
  doc["backend"] = m.backend;
  Json dataset;
  dataset["path"] = m.dataset_path;
  dataset["sha256"] = m.dataset_sha256;
  doc["dataset"] = std::move(dataset);
  Json decode;
  decode["top_k"] = m.decode.top_k;
  decode["max_tokens"] = m.decode.max_tokens;
  decode["temperature"] = 0.0;
  decode["probe_position"] = m.decode.probe_position;
  decode["always_recover"] = m.decode.always_recover;
  doc["decode"] = std::move(decode);
  doc["config"] = to_json(m.config);
  return doc;
}

Json manifest_file_json(const RunManifest& m) {
  Json doc = manifest_data_json(m);
  doc["timestamp"] = m.timestamp;
  doc["concurrency"] = m.concurrency;
  return doc;
}

Json report_json(const MetricsReport& report, const RunManifest& manifest,
                 const std::vector<RecordFailure>& failures) {
  Json doc;
  doc["manifest"] = manifest_data_json(manifest);
  doc["report"] = to_json(report);
  doc["failures"] = failures_json(failures);
  return doc;
}

void write_report_csv(std::ostream& out, const MetricsReport& report) {
  out << "bucket,metric,value\n";
  for_each_section(report, [&](std::string_view name, const BucketMetrics& m) {
    out << name << ",n_records," << m.n_records << '\n';
    for (const auto& [k, v] : m.hits_at) {
      out << name << ",hits@" << k << ',' << format_double(v) << '\n';
    }
    out << name << ",accuracy," << format_double(m.accuracy) << '\n';
    for (const auto& [cls, v] : m.response_dist) {
      out << name << ",response." << to_string(cls) << ',' << format_double(v)
          << '\n';
    }
  });
}

void write_rank_cdf_csv(std::ostream& out, const MetricsReport& report) {
  out << "rank,cumulative_fraction,bucket\n";
  for_each_section(report, [&](std::string_view name, const BucketMetrics& m) {
    for (const auto& [rank, frac] : m.rank_cdf) {
      out << rank << ',' << format_double(frac) << ',' << name << '\n';
    }
  });
}

void write_report_table(std::ostream& out, const MetricsReport& report) {
  out << std::left << std::setw(10) << "bucket" << std::right << std::setw(8)
      << "n";
  for (const auto& [k, v] : report.overall.hits_at) {
    out << std::setw(10) << ("Hits@" + std::to_string(k));
  }
  out << std::setw(10) << "Acc" << std::setw(10) << "Correct" << std::setw(10)
      << "Wrong" << std::setw(10) << "Uninf" << '\n';
  for_each_section(report, [&](std::string_view name, const BucketMetrics& m) {
    out << std::left << std::setw(10) << name << std::right << std::setw(8)
        << m.n_records;
    for (const auto& [k, v] : m.hits_at) out << std::setw(10) << percent(v);
    out << std::setw(10) << percent(m.accuracy);
    for (const auto& [cls, v] : m.response_dist) {
      out << std::setw(10) << percent(v);
    }
    out << '\n';
  });
}

double accuracy_delta(const BucketMetrics& before, const BucketMetrics& after) {
  if (before.n_records != after.n_records || before.n_records == 0) {
    throw InputError("accuracy_delta: reports cover different records");
  }
  return static_cast<double>(after.n_correct - before.n_correct) /
         static_cast<double>(before.n_records);
}

Json recall_report_json(const BatchRecallResult& result,
                        const RunManifest& manifest) {
  Json doc;
  doc["manifest"] = manifest_data_json(manifest);
  Json stats;
  stats["records"] = result.records.size();
  stats["failed"] = result.failures.size();
  stats["second_queries"] = result.second_queries;
  doc["stats"] = std::move(stats);
  doc["before"] = result.before ? to_json(*result.before) : Json(nullptr);
  doc["after"] = result.after ? to_json(*result.after) : Json(nullptr);
  doc["failures"] = failures_json(result.failures);
  return doc;
}

void write_recall_csv(std::ostream& out, const MetricsReport& before,
                      const MetricsReport& after) {
  out << "bucket,accuracy_before,accuracy_after,delta\n";
  for_each_section(before, [&](std::string_view name, const BucketMetrics& b) {
    const BucketMetrics& a =
        name == "overall" ? after.overall : after.per_bucket.at(parse_bucket(name));
    out << name << ',' << format_double(b.accuracy) << ','
        << format_double(a.accuracy) << ',' << format_double(accuracy_delta(b, a))
        << '\n';
  });
}

void write_recall_table(std::ostream& out, const MetricsReport& before,
                        const MetricsReport& after) {
  out << std::left << std::setw(10) << "bucket" << std::right << std::setw(8)
      << "n" << std::setw(10) << "before" << std::setw(10) << "after"
      << std::setw(10) << "delta" << '\n';
  for_each_section(before, [&](std::string_view name, const BucketMetrics& b) {
    const BucketMetrics& a =
        name == "overall" ? after.overall : after.per_bucket.at(parse_bucket(name));
    const double delta = accuracy_delta(b, a);
    out << std::left << std::setw(10) << name << std::right << std::setw(8)
        << b.n_records << std::setw(10) << percent(b.accuracy) << std::setw(10)
        << percent(a.accuracy) << std::setw(10)
        << ((delta >= 0 ? "+" : "") + percent(delta)) << '\n';
  });
}

void write_trace_jsonl(std::ostream& out,
                       const std::vector<RecallResult>& results) {
  for (const auto& r : results) out << dump_compact(to_json(r.trace)) << '\n';
}

}  // namespace latent_recall
