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

#include <ostream>
#include <string>
#include <vector>

#include "latent_recall/metrics.h"
#include "latent_recall/recall.h"
#include "latent_recall/serialize.h"

namespace latent_recall {

// Reproducibility envelope embedded in every report. The timestamp and the
// concurrency level live only in manifest.json so that data files stay
// byte-identical across runs.
struct RunManifest {
  MetricConfig config;
  DecodeOptions decode;
  std::string backend;
  std::string dataset_path;
  std::string dataset_sha256;
  std::string tool_version;
  std::string timestamp;  // ISO-8601 UTC
  int concurrency = 1;
};

std::string sha256_hex(std::string_view data);
std::string tool_version();

// SOURCE_DATE_EPOCH when set, otherwise the current time.
std::string current_timestamp();

Json manifest_data_json(const RunManifest& manifest);  // without timestamp
Json manifest_file_json(const RunManifest& manifest);  // everything

// report.json
Json report_json(const MetricsReport& report, const RunManifest& manifest,
                 const std::vector<RecordFailure>& failures);
// report.csv: bucket,metric,value rows at full precision.
void write_report_csv(std::ostream& out, const MetricsReport& report);
// rank_cdf.csv: rank,cumulative_fraction,bucket
void write_rank_cdf_csv(std::ostream& out, const MetricsReport& report);
// Percentages with one decimal for terminals.
void write_report_table(std::ostream& out, const MetricsReport& report);

// recall_report.json
Json recall_report_json(const BatchRecallResult& result,
                        const RunManifest& manifest);
// recall_table.csv: bucket,accuracy_before,accuracy_after,delta
void write_recall_csv(std::ostream& out, const MetricsReport& before,
                      const MetricsReport& after);
void write_recall_table(std::ostream& out, const MetricsReport& before,
                        const MetricsReport& after);
// One RecallTrace object per line, sorted by record_id.
void write_trace_jsonl(std::ostream& out,
                       const std::vector<RecallResult>& results);

// Accuracy difference computed from integer counts so that it is the
// correctly rounded value of (after - before) / n.
double accuracy_delta(const BucketMetrics& before, const BucketMetrics& after);

}  // namespace latent_recall
