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

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "latent_recall/mock_backend.h"

namespace httplib {
class Server;
}

namespace latent_recall {

struct MockServerOptions {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port
  int fail_first = 0;  // answer the first N completion requests with 500
};

// Serves a GapModelSpec over the OpenAI-compatible completions protocol.
class MockServer {
 public:
  MockServer(GapModelSpec spec, MockServerOptions options);
  ~MockServer();

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  // Binds and starts serving on a background thread. Throws InputError
  // when the port cannot be bound.
  void start();
  void stop();

  int port() const { return port_; }
  std::string url() const;

  // Raw bodies of every completion request received so far.
  std::vector<std::string> received_bodies() const;

  // Request handler, usable without a socket. Returns status and body.
  std::pair<int, std::string> handle_completion(const std::string& body);

 private:
  MockBackend backend_;
  MockServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> failures_left_;
  mutable std::mutex mu_;
  std::vector<std::string> bodies_;
};

}  // namespace latent_recall
