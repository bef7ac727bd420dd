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


#include "latent_recall/cli.h"

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "latent_recall/dataset.h"
#include "latent_recall/dump.h"
#include "latent_recall/http_backend.h"
#include "latent_recall/mock_backend.h"
#include "latent_recall/mock_server.h"
#include "latent_recall/recall.h"
#include "latent_recall/report.h"
#include "latent_recall/text.h"

namespace latent_recall {
namespace {

namespace fs = std::filesystem;

struct MetricFlags {
  std::string k_list = "1,5,50,100";
  double head_frac = 0.10;
  double torso_frac = 0.40;
  int min_match_len = 3;
  int min_token_len = 3;
  std::string stopwords;
  std::vector<std::string> prefixes;
};

struct BackendFlags {
  std::string kind = "http";
  std::string endpoint;
  std::string model;
  int max_top_logprobs = 100;
  std::string log_base = "e";
  int attempts = 3;
  int retry_delay_ms = 200;
  std::string mock_spec;
  std::string dump;
  bool fix_order = false;
};

struct RunFlags {
  std::string dataset;
  std::string format;
  std::string alias_delimiter = "||";
  std::string out;
  std::string trace;
  int concurrency = 1;
  int max_tokens = 32;
  int probe_position = 0;
  bool always_recover = false;
};

std::atomic<bool> g_stop_requested{false};

extern "C" void on_stop_signal(int) { g_stop_requested.store(true); }

std::vector<int> parse_k_list(const std::string& text) {
  std::vector<int> ks;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const int k = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      ks.push_back(k);
    } catch (const std::exception&) {
      throw InputError("--k expects a comma-separated list of integers, got '" +
                       text + "'");
    }
  }
  return ks;
}

MetricConfig build_config(const MetricFlags& flags) {
  MetricConfig config = MetricConfig::defaults();
  config.k_values = parse_k_list(flags.k_list);
  config.head_fraction = flags.head_frac;
  config.torso_fraction = flags.torso_frac;
  config.min_match_len = flags.min_match_len;
  config.min_token_len = flags.min_token_len;
  if (!flags.stopwords.empty()) config.stopwords = load_stopwords(flags.stopwords);
  if (!flags.prefixes.empty()) config.uninformative_prefixes = flags.prefixes;
  config.validate();
  return config;
}

std::unique_ptr<LMBackend> build_backend(const BackendFlags& flags) {
  if (flags.kind == "mock") {
    if (flags.mock_spec.empty()) throw InputError("--backend mock needs --mock-spec");
    return std::make_unique<MockBackend>(load_gap_model_spec(flags.mock_spec),
                                         flags.mock_spec);
  }
  if (flags.kind == "dump") {
    if (flags.dump.empty()) throw InputError("--backend dump needs --dump");
    DumpReadOptions options;
    options.fix_order = flags.fix_order;
    options.default_base = parse_log_base(flags.log_base);
    return std::make_unique<DumpBackend>(read_logit_dump(flags.dump, options),
                                         flags.dump);
  }
  if (flags.kind == "http") {
    if (flags.endpoint.empty()) throw InputError("--backend http needs --endpoint");
    EndpointConfig config = EndpointConfig::from_env(flags.endpoint);
    config.model = flags.model;
    config.max_top_logprobs = flags.max_top_logprobs;
    config.log_base = parse_log_base(flags.log_base);
    config.max_attempts = flags.attempts;
    config.initial_backoff = std::chrono::milliseconds(flags.retry_delay_ms);
    return std::make_unique<HttpBackend>(std::move(config));
  }
  throw InputError("unknown backend '" + flags.kind + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
  if (!out) throw InputError("failed writing " + path.string());
}

std::string pretty(const Json& doc) {
  return doc.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

std::vector<QARecord> load_partitioned(const RunFlags& run) {
  const DatasetFormat format = run.format.empty()
                                   ? guess_dataset_format(run.dataset)
                                   : parse_dataset_format(run.format);
  std::vector<QARecord> records =
      parse_dataset(read_file(run.dataset), format, {run.alias_delimiter});
  if (records.empty()) throw InputError("dataset " + run.dataset + " is empty");
  for (const auto& r : records) {
    if (r.bucket == Bucket::kUnassigned) {
      throw InputError("record " + r.record_id +
                       " has no bucket; run `partition` first");
    }
  }
  return records;
}

RunManifest make_manifest(const MetricConfig& config, const DecodeOptions& decode,
                          const LMBackend& backend, const RunFlags& run) {
  RunManifest m;
  m.config = config;
  m.decode = decode;
  m.backend = backend.describe();
  m.dataset_path = run.dataset;
  m.dataset_sha256 = sha256_hex(read_file(run.dataset));
  m.tool_version = tool_version();
  m.timestamp = current_timestamp();
  m.concurrency = run.concurrency;
  return m;
}

void check_capability(const LMBackend& backend, const MetricConfig& config) {
  const int cap = backend.capabilities().max_top_logprobs;
  if (cap < config.max_k()) {
    throw InputError("backend provides " + std::to_string(cap) +
                     " top logprobs but the largest k is " +
                     std::to_string(config.max_k()));
  }
}

DecodeOptions decode_options(const MetricConfig& config, const RunFlags& run) {
  DecodeOptions d;
  d.top_k = config.max_k();
  d.max_tokens = run.max_tokens;
  d.probe_position = run.probe_position;
  d.always_recover = run.always_recover;
  if (d.max_tokens < 1) throw InputError("--max-tokens must be >= 1");
  if (d.probe_position < 0) throw InputError("--probe-position must be >= 0");
  if (run.concurrency < 1) throw InputError("--concurrency must be >= 1");
  return d;
}

void report_failures(const std::vector<RecordFailure>& failures) {
  for (const auto& f : failures) {
    std::cerr << "failed: " << f.record_id << ": " << f.message << '\n';
  }
  if (!failures.empty()) {
    std::cerr << failures.size() << " record(s) failed\n";
  }
}

int cmd_partition(const RunFlags& run, const MetricFlags& metric) {
  const DatasetFormat format = run.format.empty()
                                   ? guess_dataset_format(run.dataset)
                                   : parse_dataset_format(run.format);
  auto records = load_dataset(run.dataset, format, {run.alias_delimiter});
  records = partition_by_popularity(std::move(records), metric.head_frac,
                                    metric.torso_frac);
  std::ostringstream out;
  write_dataset(out, records);
  write_file(run.out, out.str());
  std::map<Bucket, int> counts;
  for (const auto& r : records) ++counts[r.bucket];
  std::cout << "head " << counts[Bucket::kHead] << ", torso "
            << counts[Bucket::kTorso] << ", tail " << counts[Bucket::kTail]
            << " records -> " << run.out << '\n';
  return kExitOk;
}

int cmd_evaluate(const RunFlags& run, const MetricFlags& metric,
                 const BackendFlags& backend_flags) {
  const MetricConfig config = build_config(metric);
  const DecodeOptions decode = decode_options(config, run);
  const auto records = load_partitioned(run);
  auto backend = build_backend(backend_flags);
  check_capability(*backend, config);

  const EvaluationRun result =
      evaluate_records(records, *backend, config, decode, run.concurrency);
  report_failures(result.failures);
  if (!result.report) {
    std::cerr << "no record could be evaluated\n";
    return kExitEvalFailure;
  }

  const RunManifest manifest = make_manifest(config, decode, *backend, run);
  const fs::path out(run.out);
  std::ostringstream csv, cdf;
  write_report_csv(csv, *result.report);
  write_rank_cdf_csv(cdf, *result.report);
  write_file(out / "report.json",
             pretty(report_json(*result.report, manifest, result.failures)));
  write_file(out / "report.csv", csv.str());
  write_file(out / "rank_cdf.csv", cdf.str());
  write_file(out / "manifest.json", pretty(manifest_file_json(manifest)));
  write_report_table(std::cout, *result.report);
  return result.failures.empty() ? kExitOk : kExitEvalFailure;
}

int cmd_recall(const RunFlags& run, const MetricFlags& metric,
               const BackendFlags& backend_flags) {
  const MetricConfig config = build_config(metric);
  const DecodeOptions decode = decode_options(config, run);
  const auto records = load_partitioned(run);
  auto backend = build_backend(backend_flags);
  check_capability(*backend, config);

  const BatchRecallResult result =
      batch_recall(records, *backend, config, decode, run.concurrency);
  report_failures(result.failures);
  if (!result.before || !result.after) {
    std::cerr << "no record could be evaluated\n";
    return kExitEvalFailure;
  }

  const RunManifest manifest = make_manifest(config, decode, *backend, run);
  const fs::path out(run.out);
  std::ostringstream csv;
  write_recall_csv(csv, *result.before, *result.after);
  write_file(out / "recall_report.json", pretty(recall_report_json(result, manifest)));
  write_file(out / "recall_table.csv", csv.str());
  Json manifest_doc = manifest_file_json(manifest);
  manifest_doc["second_queries"] = result.second_queries;
  write_file(out / "manifest.json", pretty(manifest_doc));
  if (!run.trace.empty()) {
    std::ostringstream trace;
    write_trace_jsonl(trace, result.recalled);
    write_file(run.trace, trace.str());
  }
  write_recall_table(std::cout, *result.before, *result.after);
  std::cout << "second queries: " << result.second_queries << '\n';
  return result.failures.empty() ? kExitOk : kExitEvalFailure;
}

int cmd_mock_serve(const std::string& spec_path, const MockServerOptions& options) {
  MockServer server(load_gap_model_spec(spec_path), options);
  g_stop_requested.store(false);
  struct sigaction action {};
  action.sa_handler = on_stop_signal;
  sigemptyset(&action.sa_mask);
  sigaction(SIGINT, &action, nullptr);
  sigaction(SIGTERM, &action, nullptr);

  server.start();
  std::cout << "listening on " << server.url() << std::endl;
  while (!g_stop_requested.load()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  server.stop();
  std::cout << "mock server stopped" << std::endl;
  return kExitOk;
}

struct ConvertFlags {
  std::string in;
  std::string out;
  std::string input_format = "dump";
  int top_k = 100;
  int probe_position = 0;
};

int cmd_dump_convert(const ConvertFlags& flags, const BackendFlags& backend_flags) {
  const LogBase base = parse_log_base(backend_flags.log_base);
  std::map<std::string, AnswerDistribution> dists;
  if (flags.input_format == "dump") {
    DumpReadOptions options;
    options.fix_order = backend_flags.fix_order;
    options.default_base = base;
    dists = read_logit_dump(flags.in, options).distributions;
  } else if (flags.input_format == "openai") {
    const std::string content = read_file(flags.in);
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const std::string where = flags.in + " line " + std::to_string(line_no);
      try {
        const auto doc = nlohmann::json::parse(line);
        if (!doc.contains("record_id") || !doc["record_id"].is_string() ||
            !doc.contains("response")) {
          throw InputError("expected {\"record_id\": ..., \"response\": {...}}");
        }
        AnswerDistribution dist = distribution_from_completion_response(
            doc["response"], flags.top_k, flags.probe_position, base);
        dist.record_id = doc["record_id"].get<std::string>();
        if (!dists.emplace(dist.record_id, dist).second) {
          throw InputError("duplicate record_id " + dist.record_id);
        }
      } catch (const nlohmann::json::exception& e) {
        throw InputError(where + ": malformed JSON: " + e.what());
      } catch (const Error& e) {
        throw InputError(where + ": " + e.what());
      }
    }
  } else {
    throw InputError("unknown --input-format '" + flags.input_format + "'");
  }
  std::ostringstream out;
  write_logit_dump(out, dists);
  write_file(flags.out, out.str());
  std::cout << dists.size() << " distributions -> " << flags.out << '\n';
  return kExitOk;
}

void add_metric_flags(CLI::App* cmd, MetricFlags& m) {
  cmd->add_option("--k", m.k_list, "Comma-separated k values")
      ->capture_default_str();
  cmd->add_option("--min-match-len", m.min_match_len,
                  "Shared characters needed for a token match")
      ->capture_default_str();
  cmd->add_option("--min-token-len", m.min_token_len,
                  "Tokens shorter than this are uninformative")
      ->capture_default_str();
  cmd->add_option("--stopwords", m.stopwords, "Stop-word list file");
  cmd->add_option("--uninformative-prefix", m.prefixes,
                  "Prefix marking uninformative tokens (repeatable, default uns)");
  cmd->add_option("--head-frac", m.head_frac)->capture_default_str();
  cmd->add_option("--torso-frac", m.torso_frac)->capture_default_str();
}

void add_backend_flags(CLI::App* cmd, BackendFlags& b) {
  cmd->add_option("--backend", b.kind, "http, dump or mock")
      ->check(CLI::IsMember({"http", "dump", "mock"}))
      ->capture_default_str();
  cmd->add_option("--endpoint", b.endpoint, "Base URL of an OpenAI-compatible server");
  cmd->add_option("--model", b.model, "Model name sent with each request");
  cmd->add_option("--max-top-logprobs", b.max_top_logprobs,
                  "Top logprobs the endpoint can return")
      ->capture_default_str();
  cmd->add_option("--log-base", b.log_base, "Base of incoming logprobs (e or 10)")
      ->capture_default_str();
  cmd->add_option("--retries", b.attempts, "Attempts per request")
      ->capture_default_str();
  cmd->add_option("--retry-delay-ms", b.retry_delay_ms, "Initial backoff")
      ->capture_default_str();
  cmd->add_option("--mock-spec", b.mock_spec, "Gap model spec for --backend mock");
  cmd->add_option("--dump", b.dump, "Logit dump for --backend dump");
  cmd->add_flag("--fix-order", b.fix_order, "Re-sort unsorted dump candidates");
}

void add_run_flags(CLI::App* cmd, RunFlags& r) {
  cmd->add_option("--dataset", r.dataset, "Partitioned dataset")->required();
  cmd->add_option("--format", r.format, "jsonl or csv (default: by extension)");
  cmd->add_option("--alias-delimiter", r.alias_delimiter)->capture_default_str();
  cmd->add_option("--out", r.out, "Output directory")->required();
  cmd->add_option("--concurrency", r.concurrency, "Requests in flight")
      ->capture_default_str();
  cmd->add_option("--max-tokens", r.max_tokens)->capture_default_str();
  cmd->add_option("--probe-position", r.probe_position,
                  "Decoding step whose candidates are inspected")
      ->capture_default_str();
}

void use_stderr_logging() {
  static const bool once = [] {
    auto logger = spdlog::stderr_color_mt("latent-recall");
    spdlog::set_default_logger(logger);
    return true;
  }();
  (void)once;
}

}  // namespace

int run_cli(int argc, char** argv) {
  use_stderr_logging();

  CLI::App app{"Measure stored versus expressed knowledge of language models"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  RunFlags run;
  MetricFlags metric;
  BackendFlags backend;
  ConvertFlags convert;
  std::string spec_path;
  MockServerOptions serve;

  auto* partition = app.add_subcommand("partition", "Assign head/torso/tail buckets");
  partition->add_option("--dataset", run.dataset, "Input dataset")->required();
  partition->add_option("--format", run.format, "jsonl or csv");
  partition->add_option("--alias-delimiter", run.alias_delimiter)
      ->capture_default_str();
  partition->add_option("--out", run.out, "Output JSONL file")->required();
  partition->add_option("--head-frac", metric.head_frac)->capture_default_str();
  partition->add_option("--torso-frac", metric.torso_frac)->capture_default_str();

  auto* evaluate = app.add_subcommand("evaluate", "Hits@k, accuracy and rank CDF");
  add_run_flags(evaluate, run);
  add_metric_flags(evaluate, metric);
  add_backend_flags(evaluate, backend);

  auto* recall = app.add_subcommand("recall", "Accuracy before and after recall decoding");
  add_run_flags(recall, run);
  add_metric_flags(recall, metric);
  add_backend_flags(recall, backend);
  recall->add_option("--trace", run.trace, "Write a RecallTrace JSONL file");
  recall->add_flag("--always-recover", run.always_recover,
                   "Recover even when the greedy answer is informative");

  auto* mock_serve = app.add_subcommand("mock-serve", "Serve a gap model spec over HTTP");
  mock_serve->add_option("--spec", spec_path, "Gap model spec JSON")->required();
  mock_serve->add_option("--port", serve.port, "0 picks a free port")
      ->capture_default_str();
  mock_serve->add_option("--host", serve.host)->capture_default_str();
  mock_serve->add_option("--fail-first", serve.fail_first,
                         "Answer the first N requests with HTTP 500")
      ->capture_default_str();

  auto* dump_convert =
      app.add_subcommand("dump-convert", "Canonicalize a logit dump");
  dump_convert->add_option("--in", convert.in, "Input file")->required();
  dump_convert->add_option("--out", convert.out, "Canonical dump JSONL")->required();
  dump_convert->add_option("--input-format", convert.input_format,
                           "dump or openai ({record_id, response} lines)")
      ->check(CLI::IsMember({"dump", "openai"}))
      ->capture_default_str();
  dump_convert->add_option("--top-k", convert.top_k)->capture_default_str();
  dump_convert->add_option("--probe-position", convert.probe_position)
      ->capture_default_str();
  dump_convert->add_option("--log-base", backend.log_base)->capture_default_str();
  dump_convert->add_flag("--fix-order", backend.fix_order);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*partition) return cmd_partition(run, metric);
    if (*evaluate) return cmd_evaluate(run, metric, backend);
    if (*recall) return cmd_recall(run, metric, backend);
    if (*mock_serve) return cmd_mock_serve(spec_path, serve);
    if (*dump_convert) return cmd_dump_convert(convert, backend);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitEvalFailure;
  }
  return kExitInputError;
}

}  // namespace latent_recall
