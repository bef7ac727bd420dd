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


// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "fixtures.h"
#include "latent_recall/dataset.h"
#include "latent_recall/filter.h"
#include "latent_recall/http_backend.h"
#include "latent_recall/matcher.h"
#include "latent_recall/metrics.h"
#include "latent_recall/mock_server.h"
#include "latent_recall/recall.h"
#include "latent_recall/report.h"
#include "latent_recall/serialize.h"
#include "oracles.h"

namespace latent_recall {
namespace {

namespace fs = std::filesystem;

// Collects the first mismatch of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failure_.empty()) failure_ = what;
  }
  bool ok() const { return failure_.empty(); }
  const std::string& failure() const { return failure_; }

 private:
  std::string failure_;
};

std::string random_string(std::mt19937& rng, int max_len, int alphabet) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> ch(0, alphabet - 1);
  std::string s;
  for (int i = len(rng); i > 0; --i) s.push_back(static_cast<char>('a' + ch(rng)));
  return s;
}

void matcher_oracle(Check& check) {
  std::mt19937 rng(20240611);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::string a = random_string(rng, 30, 4);
    const std::string b = random_string(rng, 30, 4);
    if (longest_common_substring_len(std::string_view(a), b) != oracle::brute_lcs(a, b)) {
      ++mismatches;
    }
  }
  check.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
}

void filter_conformance(Check& check) {
  const MetricConfig config = MetricConfig::defaults();
  struct Case {
    const char* token;
    FilterReason reason;
  };
  const Case cases[] = {
      {"unsure", FilterReason::kUnsPrefix}, {"Unsure.", FilterReason::kUnsPrefix},
      {" UNS", FilterReason::kUnsPrefix},   {"  ", FilterReason::kEmpty},
      {"", FilterReason::kEmpty},           {"\t\n", FilterReason::kEmpty},
      {"of", FilterReason::kTooShort},      {" a", FilterReason::kTooShort},
      {"the", FilterReason::kStopwordOnly}, {"of the", FilterReason::kStopwordOnly},
      {"Olympia", FilterReason::kNone},     {"the capital", FilterReason::kNone},
  };
  for (const auto& c : cases) {
    const FilterVerdict v = is_uninformative_token(c.token, config);
    check.expect(v.reason == c.reason && v.uninformative == (c.reason != FilterReason::kNone),
                 std::string("token '") + c.token + "' gave " +
                     std::string(to_string(v.reason)));
  }
  check.expect(classify_response("ababababab", config) == ResponseKind::kUninformative,
               "ababababab not uninformative");
  check.expect(classify_response("Olympia is the capital.", config) ==
                   ResponseKind::kInformative,
               "plain answer flagged");

  const RepetitionRule rule = config.repetition;
  int mismatches = 0;
  long strings = 0;
  for (int len = 0; len <= 12; ++len) {
    for (int bits = 0; bits < (1 << len); ++bits) {
      std::u32string s;
      for (int i = 0; i < len; ++i) s.push_back((bits >> i) & 1 ? U'b' : U'a');
      ++strings;
      if (is_repetitive(s, rule) != oracle::brute_repetitive(s, rule.max_period,
                                                             rule.min_repeats,
                                                             rule.min_coverage_percent)) {
        ++mismatches;
      }
    }
  }
  check.expect(mismatches == 0, std::to_string(mismatches) + " of " +
                                    std::to_string(strings) + " repetition mismatches");
}

void hits_oracle(Check& check) {
  std::mt19937 rng(99);
  for (int fixture = 0; fixture < 1000 && check.ok(); ++fixture) {
    const int n = std::uniform_int_distribution<int>(1, 200)(rng);
    const int depth = std::uniform_int_distribution<int>(1, 100)(rng);
    std::uniform_int_distribution<int> rank(0, depth);
    std::vector<std::optional<int>> ranks;
    std::vector<RankObservation> obs;
    for (int i = 0; i < n; ++i) {
      const int r = rank(rng);
      ranks.push_back(r == 0 ? std::nullopt : std::optional<int>(r));
      obs.push_back({ranks.back(), depth});
    }
    const auto cdf = compute_rank_cdf(ranks, depth);
    check.expect(cdf.size() == static_cast<std::size_t>(depth), "cdf length");
    double prev = -1.0;
    for (int k = 1; k <= depth && check.ok(); ++k) {
      const double h = compute_hits_at_k(obs, k);
      check.expect(h == oracle::count_hits(ranks, k),
                   "fixture " + std::to_string(fixture) + " k=" + std::to_string(k));
      check.expect(h >= prev, "not monotone at k=" + std::to_string(k));
      check.expect(cdf[static_cast<std::size_t>(k - 1)].second == h,
                   "cdf differs at r=" + std::to_string(k));
      prev = h;
    }
  }
}

void algorithm_equivalence(Check& check) {
  const MetricConfig config = MetricConfig::defaults();
  const std::vector<std::string> stop(config.stopwords.begin(), config.stopwords.end());
  std::mt19937 rng(4242);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  for (int trial = 0; trial < 10000 && check.ok(); ++trial) {
    // Each token carries the verdict it was generated with.
    std::vector<std::pair<TokenCandidate, bool>> labelled;
    const int n = pick(1, 12);
    for (int i = 0; i < n; ++i) {
      std::string token;
      const bool uninformative = pick(0, 1) == 1;
      if (uninformative) {
        switch (pick(0, 3)) {
          case 0: token = std::string(static_cast<std::size_t>(pick(0, 2)), ' '); break;
          case 1: token = "uns" + random_string(rng, 4, 26); break;
          case 2: token = std::string(1, ' ') + random_string(rng, 2, 3).substr(0, 2); break;
          default: token = " " + stop[static_cast<std::size_t>(pick(0, static_cast<int>(stop.size()) - 1))]; break;
        }
      } else {
        token = " Q" + random_string(rng, 4, 26) + "zz";
      }
      const double lp = -0.25 * pick(0, 8);
      labelled.push_back({{token, lp, 0}, uninformative});
    }
    // Canonical order: logprob descending, token bytes ascending.
    std::stable_sort(labelled.begin(), labelled.end(), [](const auto& a, const auto& b) {
      if (a.first.logprob != b.first.logprob) return a.first.logprob > b.first.logprob;
      return a.first.token_text < b.first.token_text;
    });
    AnswerDistribution dist;
    for (std::size_t i = 0; i < labelled.size(); ++i) {
      labelled[i].first.rank = static_cast<int>(i) + 1;
      dist.candidates.push_back(labelled[i].first);
    }
    // argmax over the tokens whose label is informative
    std::optional<TokenCandidate> expected;
    for (const auto& [cand, bad] : labelled) {
      if (bad) continue;
      if (!expected || cand.logprob > expected->logprob ||
          (cand.logprob == expected->logprob && cand.token_text < expected->token_text)) {
        expected = cand;
      }
    }
    const RecoverySelection sel = select_recovery_token(dist, config);
    check.expect(sel.selected == expected, "trial " + std::to_string(trial) + " selection differs");
    const std::size_t prefix = expected ? static_cast<std::size_t>(expected->rank - 1)
                                        : labelled.size();
    check.expect(sel.skipped.size() == prefix,
                 "trial " + std::to_string(trial) + " skipped the wrong prefix");
  }
}

struct GapOutcome {
  int n = 0;
  int correct_before = 0;
  int correct_after = 0;
  double delta = 0.0;
  int hits1 = 0;
  int hits2 = 0;
  double hits_at_2 = 0.0;
  std::string before_json;
  std::string after_json;
};

GapOutcome run_gap(const testing::GapFixture& fx, LMBackend& backend, Check& check) {
  MetricConfig config = MetricConfig::defaults();
  config.k_values = {1, 2, 5};
  const auto res = batch_recall(fx.records, backend, config, DecodeOptions{.top_k = 5}, 4);
  GapOutcome out;
  check.expect(res.failures.empty(), "records failed");
  if (!res.before || !res.after) return out;
  out.n = res.before->overall.n_records;
  out.correct_before = res.before->overall.n_correct;
  out.correct_after = res.after->overall.n_correct;
  out.delta = accuracy_delta(res.before->overall, res.after->overall);
  out.hits1 = res.before->overall.hit_counts.at(1);
  out.hits2 = res.before->overall.hit_counts.at(2);
  out.hits_at_2 = res.before->overall.hits_at.at(2);
  out.before_json = dump_compact(to_json(*res.before));
  out.after_json = dump_compact(to_json(*res.after));
  return out;
}

void gap_fixture_end_to_end(Check& check) {
  struct P {
    int tenths;
    double value;
  };
  const P ps[] = {{0, 0.0}, {1, 0.1}, {3, 0.3}, {5, 0.5}};
  const fs::path dir = testing::make_temp_dir("accept_gap");
  for (const auto& p : ps) {
    const auto fx = testing::make_gap_fixture(200, p.value);
    const std::string tag = "p=" + format_double(p.value) + " ";
    check.expect(fx.n_hidden * 10 == 200 * p.tenths, tag + "fixture size");
    testing::write_fixture_files(fx, dir);

    MockBackend local(fx.spec);
    const GapOutcome in_process = run_gap(fx, local, check);

    testing::SpawnedMockServer server(LATENT_RECALL_CLI, dir / "spec.json");
    EndpointConfig endpoint;
    endpoint.url = server.url();
    HttpBackend http(endpoint);
    const GapOutcome over_http = run_gap(fx, http, check);
    check.expect(server.terminate() == 0, tag + "server did not exit cleanly");

    for (const auto* g : {&in_process, &over_http}) {
      const std::string via = g == &in_process ? "in-process " : "http ";
      // after - before == p as exact rationals: counts differ by p * n.
      check.expect((g->correct_after - g->correct_before) * 10 == p.tenths * g->n,
                   via + tag + "accuracy delta " +
                       std::to_string(g->correct_after - g->correct_before) + "/" +
                       std::to_string(g->n));
      check.expect(g->delta == p.value, via + tag + "reported delta " + format_double(g->delta));
      // Hits@2 == Hits@1 + p, again exactly in counts.
      check.expect((g->hits2 - g->hits1) * 10 == p.tenths * g->n, via + tag + "Hits@2 - Hits@1");
      check.expect(g->hits_at_2 == static_cast<double>(g->hits1 + p.tenths * g->n / 10) / g->n,
                   via + tag + "Hits@2 value");
    }
    check.expect(in_process.before_json == over_http.before_json &&
                     in_process.after_json == over_http.after_json,
                 tag + "http and in-process reports differ");
    if (p.tenths == 0) {
      check.expect(in_process.before_json == in_process.after_json,
                   "p=0 before and after differ");
    }
  }
  fs::remove_all(dir);
}

void wire_conformance(Check& check) {
  const fs::path golden(LATENT_RECALL_GOLDEN_DIR);
  const CompletionRequest request{.record_id = "golden-1",
                                  .prompt = "Q: What is the capital of Washington?\nA:",
                                  .top_k = 5,
                                  .max_tokens = 32};
  check.expect(build_completion_request_body(request, "gap-mock") ==
                   testing::read_text(golden / "request_basic.json"),
               "request body differs from golden");
  const CompletionRequest other{.record_id = "", .prompt = "Caf\xC3\xA9 \"quoted\"\tA:", .top_k = 100, .max_tokens = 16};
  check.expect(build_completion_request_body(other, "") ==
                   testing::read_text(golden / "request_no_model.json"),
               "model-less request body differs from golden");

  // Through the mock server, with one scripted 500 first.
  GapModelSpec spec;
  MockScript s;
  s.prompt = request.prompt;
  s.greedy_completion = "unsure";
  s.candidates = {{"unsure", -0.10536051565782628, 1}, {" Olymp", -1.2, 2}};
  spec.scripts.push_back(s);
  MockServer server(spec, {.fail_first = 1});
  server.start();
  EndpointConfig config;
  config.url = server.url();
  config.model = "gap-mock";
  config.initial_backoff = std::chrono::milliseconds(5);
  HttpBackend backend(config);
  const AnswerDistribution d = backend.complete(request);
  const auto bodies = server.received_bodies();
  check.expect(bodies.size() == 2, "expected one retry, saw " + std::to_string(bodies.size()) + " requests");
  check.expect(backend.retries() == 1, "retry counter");
  for (const auto& body : bodies) {
    check.expect(body == testing::read_text(golden / "request_basic.json"),
                 "server received a non-golden body");
  }
  check.expect(d.candidates == s.candidates, "candidates not bit-exact");

  // Golden response parsing.
  httplib::Server raw;
  const std::string response = testing::read_text(golden / "response_basic.json");
  raw.Post("/v1/completions", [&](const httplib::Request&, httplib::Response& res) {
    res.set_content(response, "application/json");
  });
  const int port = raw.bind_to_any_port("127.0.0.1");
  std::thread t([&] { raw.listen_after_bind(); });
  raw.wait_until_ready();
  EndpointConfig raw_config;
  raw_config.url = "http://127.0.0.1:" + std::to_string(port);
  CompletionRequest three = request;
  three.top_k = 3;
  const AnswerDistribution parsed = http_complete(three, raw_config);
  raw.stop();
  t.join();
  check.expect(dump_compact(to_json(parsed)) + "\n" ==
                   testing::read_text(golden / "response_basic.expected.jsonl"),
               "golden response parsed differently");
  check.expect(parsed.candidates.size() == 3 &&
                   parsed.candidates[0].logprob == -0.10536051565782628 &&
                   parsed.candidates[2].logprob == -2.3025850929940455,
               "logprobs not bit-exact");
}

void partitioning(Check& check) {
  std::vector<QARecord> ten;
  for (int i = 0; i < 10; ++i) {
    QARecord r;
    r.record_id = "r" + std::to_string(i);
    r.answers = {"a"};
    r.entity_id = "e" + std::to_string(i);
    r.popularity = 10 * i;
    ten.push_back(r);
  }
  int counts[3] = {0, 0, 0};
  for (const auto& r : partition_by_popularity(ten, 0.10, 0.40)) counts[static_cast<int>(r.bucket)]++;
  check.expect(counts[0] == 1 && counts[1] == 4 && counts[2] == 5,
               "10 entities split " + std::to_string(counts[0]) + "/" +
                   std::to_string(counts[1]) + "/" + std::to_string(counts[2]));

  std::mt19937 rng(1000);
  std::uniform_int_distribution<int> pop(0, 400);
  std::vector<QARecord> records;
  std::vector<std::pair<std::string, double>> pops;
  for (int e = 0; e < 1000; ++e) {
    const int copies = 1 + e % 3;
    for (int c = 0; c < copies; ++c) {
      QARecord r;
      r.record_id = "r" + std::to_string(records.size());
      r.answers = {"a"};
      r.entity_id = "ent" + std::to_string(e);
      r.popularity = pop(rng);
      pops.emplace_back(r.entity_id, r.popularity);
      records.push_back(r);
    }
  }
  std::shuffle(records.begin(), records.end(), rng);
  const auto expected = oracle::sort_and_slice(pops, 1, 4);
  int mismatches = 0;
  for (const auto& r : partition_by_popularity(records, 0.10, 0.40)) {
    if (static_cast<int>(r.bucket) != expected.bucket.at(r.entity_id)) ++mismatches;
  }
  check.expect(mismatches == 0, std::to_string(mismatches) + " records in the wrong bucket");
}

void determinism(Check& check) {
  ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  const fs::path dir = testing::make_temp_dir("accept_det");
  const auto fx = testing::make_gap_fixture(200, 0.3);
  testing::write_fixture_files(fx, dir);
  auto run = [&](const std::string& cmd, const std::string& out, int concurrency) {
    std::vector<std::string> args = {cmd, "--dataset", (dir / "dataset.jsonl").string(),
                                     "--out", (dir / out).string(), "--backend", "mock",
                                     "--mock-spec", (dir / "spec.json").string(), "--k",
                                     "1,2,5", "--concurrency", std::to_string(concurrency)};
    if (cmd == "recall") args.insert(args.end(), {"--trace", (dir / out / "trace.jsonl").string()});
    fs::create_directories(dir / out);
    std::ostringstream sink;
    auto* old = std::cout.rdbuf(sink.rdbuf());
    const int code = testing::run_cli_args(args);
    std::cout.rdbuf(old);
    check.expect(code == 0, cmd + " exited " + std::to_string(code));
  };
  const std::vector<std::string> eval_files = {"report.json", "report.csv", "rank_cdf.csv"};
  const std::vector<std::string> recall_files = {"recall_report.json", "recall_table.csv",
                                                 "trace.jsonl"};
  for (const auto& [cmd, files] : {std::pair{std::string("evaluate"), eval_files},
                                   std::pair{std::string("recall"), recall_files}}) {
    run(cmd, cmd + "_a", 1);
    run(cmd, cmd + "_b", 1);
    run(cmd, cmd + "_c", 8);
    for (const auto& f : files) {
      const std::string a = testing::read_text(dir / (cmd + "_a") / f);
      check.expect(!a.empty(), cmd + " " + f + " empty");
      check.expect(a == testing::read_text(dir / (cmd + "_b") / f), cmd + " " + f + " differs between runs");
      check.expect(a == testing::read_text(dir / (cmd + "_c") / f),
                   cmd + " " + f + " differs between concurrency 1 and 8");
    }
    check.expect(testing::read_text(dir / (cmd + "_a") / "manifest.json") ==
                     testing::read_text(dir / (cmd + "_b") / "manifest.json"),
                 cmd + " manifest.json differs between runs");
  }
  fs::remove_all(dir);
}

struct Criterion {
  const char* name;
  double limit_seconds;  // 0: none
  std::function<void(Check&)> body;
};

}  // namespace
}  // namespace latent_recall

int main() {
  using namespace latent_recall;
  spdlog::set_level(spdlog::level::err);
  const std::vector<Criterion> criteria = {
      {"matcher oracle (10,000 random pairs)", 5.0, matcher_oracle},
      {"filter conformance and exhaustive repetition check", 0.0, filter_conformance},
      {"hits@k oracle (1,000 random fixtures)", 10.0, hits_oracle},
      {"recovery selection equals filtered argmax (10,000 lists)", 0.0,
       algorithm_equivalence},
      {"end-to-end gap fixture via in-process mock and mock-serve", 30.0,
       gap_fixture_end_to_end},
      {"wire conformance and retry path", 0.0, wire_conformance},
      {"popularity partitioning", 0.0, partitioning},
      {"determinism across runs and concurrency", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
      check.expect(false, "took longer than the limit");
    }
    char timing[64];
    std::snprintf(timing, sizeof(timing), "%.2fs", seconds);
    std::cout << (check.ok() ? "[PASS] " : "[FAIL] ") << c.name << " (" << timing;
    if (c.limit_seconds > 0) std::cout << ", limit " << c.limit_seconds << "s";
    std::cout << ")";
    if (!check.ok()) std::cout << ": " << check.failure();
    std::cout << std::endl;
    failed += check.ok() ? 0 : 1;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
