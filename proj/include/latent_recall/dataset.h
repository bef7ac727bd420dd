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
#include <string_view>
#include <vector>

#include "latent_recall/types.h"

namespace latent_recall {

enum class DatasetFormat { kJsonl, kCsv };

// From the file extension: .csv is CSV, anything else JSONL.
DatasetFormat guess_dataset_format(const std::string& path);
DatasetFormat parse_dataset_format(std::string_view text);

struct DatasetOptions {
  std::string alias_delimiter = "||";
};

// Required fields: record_id, question, prompt, answers, entity_id,
// popularity. An optional bucket field is honored. Errors carry the line
// number of the offending record.
std::vector<QARecord> parse_dataset(std::string_view content,
                                    DatasetFormat format,
                                    const DatasetOptions& options = {});
std::vector<QARecord> load_dataset(const std::string& path, DatasetFormat format,
                                   const DatasetOptions& options = {});

// JSONL, one record per line in input order, with the bucket field.
void write_dataset(std::ostream& out, const std::vector<QARecord>& records);

// Ranks entities by popularity (descending, entity_id ascending on ties;
// an entity's popularity is the maximum over its records). The first
// ceil(head_fraction*E) entities are head, the next ceil(torso_fraction*E)
// torso, the rest tail. Records inherit their entity's bucket.
std::vector<QARecord> partition_by_popularity(std::vector<QARecord> records,
                                              double head_fraction,
                                              double torso_fraction);

// ceil() that ignores representation error of a few ulps (0.1 * 30 is
// 3.0000000000000004 in binary floating point).
long long tolerant_ceil(double value);

}  // namespace latent_recall
