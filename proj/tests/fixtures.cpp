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


#include "fixtures.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <csignal>
#include <stdexcept>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include "latent_recall/cli.h"
#include "latent_recall/dataset.h"

namespace latent_recall::testing {
namespace {

std::vector<TokenCandidate> ranked(
    std::vector<std::pair<std::string, double>> items) {
  std::vector<TokenCandidate> out;
  for (auto& [token, lp] : items) out.push_back({token, lp, 0});
  canonicalize_candidates(out);
  return out;
}

}  // namespace

GapFixture make_gap_fixture(int n_records, double hidden_fraction,
                            unsigned seed) {
  GapFixture fx;
  fx.n_hidden = static_cast<int>(std::lround(hidden_fraction * n_records));
  fx.n_correct = n_records / 5;
  fx.n_dead = n_records / 10;

  std::vector<int> roles(static_cast<std::size_t>(n_records), 3);
  std::fill_n(roles.begin(), fx.n_hidden, 0);
  std::fill_n(roles.begin() + fx.n_hidden, fx.n_correct, 1);
  std::fill_n(roles.begin() + fx.n_hidden + fx.n_correct, fx.n_dead, 2);
  std::mt19937 rng(seed);
  std::shuffle(roles.begin(), roles.end(), rng);
  std::uniform_real_distribution<double> pop(0.0, 1000.0);

  fx.spec.max_top_logprobs = 100;
  fx.spec.fallback.greedy_completion = "unsure";
  fx.spec.fallback.candidates = ranked({{"unsure", -0.05}});

  for (int i = 0; i < n_records; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "q%04d", i);
    QARecord r;
    r.record_id = id;
    r.question = "What is the capital of state " + std::to_string(i) + "?";
    r.prompt = "Answer the question, or respond with unsure if you do not "
               "know.\nQ: " + r.question + "\nA:";
    r.answers = {"Olympia"};
    r.entity_id = "e" + std::to_string(i);
    r.popularity = std::round(pop(rng));
    fx.records.push_back(r);

    MockScript s;
    s.prompt = r.prompt;
    switch (roles[static_cast<std::size_t>(i)]) {
      case 0:
        s.greedy_completion = "unsure";
        s.candidates = ranked({{"unsure", -0.1}, {" Olymp", -1.2}, {" Seattle", -2.0},
                               {" Tacoma", -2.5}, {" Boise", -3.0}});
        s.continuations[" Olymp"] = "ia";
        break;
      case 1:
        s.greedy_completion = " Olympia";
        s.candidates = ranked({{" Olympia", -0.2}, {" Seattle", -1.5}, {" Tacoma", -2.0},
                               {" Boise", -2.2}, {" Salem", -3.1}});
        break;
      case 2:
        s.greedy_completion = "unsure";
        s.candidates = ranked({{"unsure", -0.1}, {"", -0.5}, {"of", -0.9},
                               {"the", -1.4}, {"uns", -2.0}});
        break;
      default:
        s.greedy_completion = " Seattle";
        s.candidates = ranked({{" Seattle", -0.3}, {" Tacoma", -1.1}, {" Spokane", -1.9},
                               {" Boise", -2.6}, {" Salem", -3.3}});
        break;
    }
    fx.spec.scripts.push_back(std::move(s));
  }
  fx.records = partition_by_popularity(std::move(fx.records), 0.10, 0.40);
  fx.spec.validate();
  return fx;
}

std::filesystem::path make_temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("latent_recall_" + tag + "_" + std::to_string(::getpid()) +
                    "_" + std::to_string(counter.fetch_add(1)));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_fixture_files(const GapFixture& fixture,
                         const std::filesystem::path& dir) {
  std::ostringstream data;
  write_dataset(data, fixture.records);
  write_text(dir / "dataset.jsonl", data.str());
  write_text(dir / "spec.json", gap_model_spec_to_json(fixture.spec).dump(2));
}

int unused_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error("socket failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  socklen_t len = sizeof(addr);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    ::close(fd);
    throw std::runtime_error("bind failed");
  }
  ::close(fd);
  return ntohs(addr.sin_port);
}

int run_cli_args(std::vector<std::string> args) {
  args.insert(args.begin(), "latent-recall");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

SpawnedMockServer::SpawnedMockServer(const std::string& cli_path,
                                     const std::filesystem::path& spec,
                                     std::vector<std::string> extra_args) {
  int fds[2];
  if (::pipe(fds) != 0) throw std::runtime_error("pipe failed");
  std::vector<std::string> args = {cli_path, "mock-serve", "--spec", spec.string(),
                                   "--port", "0"};
  args.insert(args.end(), extra_args.begin(), extra_args.end());
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  pid_ = ::fork();
  if (pid_ < 0) throw std::runtime_error("fork failed");
  if (pid_ == 0) {
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    ::execv(argv[0], argv.data());
    ::_exit(127);
  }
  ::close(fds[1]);
  stdout_fd_ = fds[0];

  std::string line;
  char c = 0;
  while (::read(stdout_fd_, &c, 1) == 1 && c != '\n') line.push_back(c);
  const std::string marker = "listening on ";
  const auto at = line.find(marker);
  if (at == std::string::npos) {
    terminate();
    throw std::runtime_error("mock server did not start: '" + line + "'");
  }
  url_ = line.substr(at + marker.size());
}

SpawnedMockServer::~SpawnedMockServer() { terminate(); }

int SpawnedMockServer::terminate() {
  if (pid_ <= 0) return -1;
  ::kill(pid_, SIGTERM);
  int status = 0;
  ::waitpid(pid_, &status, 0);
  pid_ = -1;
  if (stdout_fd_ >= 0) ::close(stdout_fd_);
  stdout_fd_ = -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace latent_recall::testing
