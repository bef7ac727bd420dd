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


// OpenMP scoring kernels against their serial references.

#include <map>
#include <random>

#include <benchmark/benchmark.h>

#include "latent_recall/kernels.h"

namespace latent_recall {
namespace {

struct Workload {
  std::vector<QARecord> records;
  std::vector<AnswerDistribution> distributions;
};

const Workload& workload(int n_records) {
  static std::map<int, Workload> cache;
  auto [it, fresh] = cache.try_emplace(n_records);
  if (!fresh) return it->second;
  const std::vector<std::string> answers = {"Olympia", "Sacramento", "Springfield",
                                            "Montgomery", "Tallahassee"};
  const std::vector<std::string> words = {" Seattle", " Tacoma", " Boise", " Salem", "unsure",
                                          " the", " Portland", " Fresno", " Chicago"};
  std::mt19937 rng(31);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  for (int i = 0; i < n_records; ++i) {
    QARecord r;
    r.record_id = "r" + std::to_string(i);
    r.answers = {answers[static_cast<std::size_t>(i) % answers.size()]};
    AnswerDistribution d;
    d.record_id = r.record_id;
    for (int c = 0; c < 100; ++c) {
      d.candidates.push_back({words[pick(rng)] + std::to_string(c), -0.05 * c, c + 1});
    }
    if (i % 3 == 0) d.candidates[60].token_text = " " + r.answers[0].substr(0, 5);
    d.greedy_completion = i % 2 ? "unsure" : " Seattle, maybe";
    it->second.records.push_back(std::move(r));
    it->second.distributions.push_back(std::move(d));
  }
  return it->second;
}

template <auto Kernel>
void run_kernel(benchmark::State& state) {
  const Workload& w = workload(static_cast<int>(state.range(0)));
  const MetricConfig config = MetricConfig::defaults();
  for (auto _ : state) {
    benchmark::DoNotOptimize(Kernel(w.records, w.distributions, config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(run_kernel<kernels::hit_ranks_serial>)->Name("hit_ranks/serial")->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(run_kernel<kernels::hit_ranks>)->Name("hit_ranks/openmp")->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(run_kernel<kernels::greedy_outcomes_serial>)->Name("greedy_outcomes/serial")->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK(run_kernel<kernels::greedy_outcomes>)->Name("greedy_outcomes/openmp")->Arg(20000)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace latent_recall

BENCHMARK_MAIN();
