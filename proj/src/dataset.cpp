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


#include "latent_recall/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "latent_recall/serialize.h"

namespace latent_recall {
namespace {

using nlohmann::json;

struct CsvRow {
  std::size_t line = 0;  // line where the row starts
  std::vector<std::string> fields;
};

// RFC 4180: quoted fields may hold commas, quotes ("") and newlines.
std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool row_started = false;
  std::size_t line = 1;
  row.line = 1;

  auto end_row = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    const bool blank = row.fields.size() == 1 && row.fields[0].empty();
    if (!blank) rows.push_back(std::move(row));
    row = CsvRow{};
    row_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (!row_started) {
      row.line = line;
      row_started = true;
    }
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw InputError("line " + std::to_string(line) +
                           ": stray quote inside an unquoted CSV field");
        }
        quoted = true;
        break;
      case ',':
        row.fields.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        ++line;
        break;
      default:
        field.push_back(c);
    }
  }
  if (quoted) {
    throw InputError("line " + std::to_string(row.line) +
                     ": unterminated quoted CSV field");
  }
  if (row_started) end_row();
  return rows;
}

std::vector<std::string> split_aliases(const std::string& cell,
                                       const std::string& delimiter) {
  std::vector<std::string> out;
  if (delimiter.empty()) {
    out.push_back(cell);
    return out;
  }
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = cell.find(delimiter, pos);
    out.push_back(cell.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + delimiter.size();
  }
  return out;
}

double parse_number(const std::string& text, const std::string& name) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw InputError("field '" + name + "' is not a number: '" + text + "'");
  }
  return value;
}

std::vector<QARecord> parse_jsonl(std::string_view content,
                                  const DatasetOptions& options,
                                  std::vector<std::size_t>& lines) {
  std::vector<QARecord> records;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      json doc = json::parse(line);
      if (doc.is_object() && doc.contains("answers") && doc["answers"].is_string()) {
        doc["answers"] =
            split_aliases(doc["answers"].get<std::string>(), options.alias_delimiter);
      }
      records.push_back(record_from_json(doc));
      lines.push_back(line_no);
    } catch (const json::exception& e) {
      throw InputError("line " + std::to_string(line_no) + ": malformed JSON: " +
                       e.what());
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<QARecord> parse_csv_records(std::string_view content,
                                        const DatasetOptions& options,
                                        std::vector<std::size_t>& lines) {
  const std::vector<CsvRow> rows = parse_csv(content);
  if (rows.empty()) return {};
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i) {
    column[rows[0].fields[i]] = i;
  }
  std::vector<QARecord> records;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    try {
      auto get = [&](const std::string& name) -> const std::string& {
        const auto it = column.find(name);
        if (it == column.end() || it->second >= row.fields.size() ||
            (name != "question" && row.fields[it->second].empty())) {
          throw InputError("missing required field '" + name + "'");
        }
        return row.fields[it->second];
      };
      QARecord rec;
      rec.record_id = get("record_id");
      rec.question = get("question");
      rec.prompt = get("prompt");
      rec.answers = split_aliases(get("answers"), options.alias_delimiter);
      rec.entity_id = get("entity_id");
      rec.popularity = parse_number(get("popularity"), "popularity");
      if (const auto it = column.find("bucket");
          it != column.end() && it->second < row.fields.size()) {
        rec.bucket = parse_bucket(row.fields[it->second]);
      }
      rec.validate();
      records.push_back(std::move(rec));
      lines.push_back(row.line);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(row.line) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace

DatasetFormat guess_dataset_format(const std::string& path) {
  return path.ends_with(".csv") ? DatasetFormat::kCsv : DatasetFormat::kJsonl;
}

DatasetFormat parse_dataset_format(std::string_view text) {
  if (text == "jsonl") return DatasetFormat::kJsonl;
  if (text == "csv") return DatasetFormat::kCsv;
  throw InputError("unknown dataset format '" + std::string(text) + "'");
}

std::vector<QARecord> parse_dataset(std::string_view content,
                                    DatasetFormat format,
                                    const DatasetOptions& options) {
  std::vector<std::size_t> lines;
  std::vector<QARecord> records = format == DatasetFormat::kCsv
                                      ? parse_csv_records(content, options, lines)
                                      : parse_jsonl(content, options, lines);
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto [it, inserted] = seen.emplace(records[i].record_id, lines[i]);
    if (!inserted) {
      throw InputError("line " + std::to_string(lines[i]) + ": duplicate record_id " +
                       records[i].record_id + " (first seen on line " +
                       std::to_string(it->second) + ")");
    }
  }
  return records;
}

std::vector<QARecord> load_dataset(const std::string& path, DatasetFormat format,
                                   const DatasetOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read dataset " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_dataset(buf.str(), format, options);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_dataset(std::ostream& out, const std::vector<QARecord>& records) {
  for (const auto& r : records) out << dump_compact(to_json(r)) << '\n';
}

long long tolerant_ceil(double value) {
  const double slack = 1e-9 * std::max(1.0, std::fabs(value));
  return static_cast<long long>(std::ceil(value - slack));
}

std::vector<QARecord> partition_by_popularity(std::vector<QARecord> records,
                                              double head_fraction,
                                              double torso_fraction) {
  if (records.empty()) throw InputError("cannot partition an empty dataset");
  MetricConfig check;
  check.head_fraction = head_fraction;
  check.torso_fraction = torso_fraction;
  check.validate();

  std::unordered_map<std::string, double> popularity;
  for (const auto& r : records) {
    r.validate();
    auto [it, inserted] = popularity.emplace(r.entity_id, r.popularity);
    if (!inserted) it->second = std::max(it->second, r.popularity);
  }
  std::vector<std::pair<std::string, double>> entities(popularity.begin(),
                                                       popularity.end());
  std::sort(entities.begin(), entities.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  const auto total = static_cast<long long>(entities.size());
  const long long n_head =
      std::min(total, tolerant_ceil(head_fraction * static_cast<double>(total)));
  const long long n_torso = std::min(
      total - n_head, tolerant_ceil(torso_fraction * static_cast<double>(total)));

  std::unordered_map<std::string, Bucket> bucket_of;
  for (long long i = 0; i < total; ++i) {
    const Bucket b = i < n_head             ? Bucket::kHead
                     : i < n_head + n_torso ? Bucket::kTorso
                                            : Bucket::kTail;
    bucket_of.emplace(entities[static_cast<std::size_t>(i)].first, b);
  }
  for (auto& r : records) r.bucket = bucket_of.at(r.entity_id);
  return records;
}

}  // namespace latent_recall
