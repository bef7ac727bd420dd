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

#include <filesystem>
#include <string>
#include <vector>

#include "latent_recall/mock_backend.h"
#include "latent_recall/types.h"

namespace latent_recall::testing {

// A dataset plus mock script where every answer is "Olympia".
//  - hidden records: greedy "unsure", " Olymp" at rank 2, continuation "ia"
//  - correct records: greedy " Olympia", matching token at rank 1
//  - dead records: greedy "unsure", every candidate uninformative
//  - the rest: greedy " Seattle", no candidate matches
// Candidate lists hold five tokens. Records are partitioned 0.1/0.4.
struct GapFixture {
  std::vector<QARecord> records;
  GapModelSpec spec;
  int n_hidden = 0;
  int n_correct = 0;
  int n_dead = 0;
};

GapFixture make_gap_fixture(int n_records, double hidden_fraction,
                            unsigned seed = 7);

// Unique empty directory under the system temp dir.
std::filesystem::path make_temp_dir(const std::string& tag);

void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

// Writes dataset.jsonl and spec.json for a fixture into dir.
void write_fixture_files(const GapFixture& fixture,
                         const std::filesystem::path& dir);

// A loopback TCP port that nothing listens on right now.
int unused_port();

// Runs the CLI in-process; argv[0] is supplied.
int run_cli_args(std::vector<std::string> args);

// A child process running `latent-recall mock-serve`. The constructor
// waits for the "listening on" line and throws std::runtime_error if the
// server does not come up.
class SpawnedMockServer {
 public:
  SpawnedMockServer(const std::string& cli_path, const std::filesystem::path& spec,
                    std::vector<std::string> extra_args = {});
  ~SpawnedMockServer();
  SpawnedMockServer(const SpawnedMockServer&) = delete;
  SpawnedMockServer& operator=(const SpawnedMockServer&) = delete;

  const std::string& url() const { return url_; }
  // Sends SIGTERM and returns the exit status, or -1 on abnormal exit.
  int terminate();

 private:
  int pid_ = -1;
  int stdout_fd_ = -1;
  std::string url_;
};

}  // namespace latent_recall::testing
