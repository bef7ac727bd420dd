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

namespace latent_recall {

enum ExitCode : int { kExitOk = 0, kExitEvalFailure = 1, kExitInputError = 2 };

// Entry point of the latent-recall command line tool.
int run_cli(int argc, char** argv);

}  // namespace latent_recall
