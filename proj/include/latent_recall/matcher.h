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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace latent_recall {

struct MatchResult {
  bool matched = false;
  int shared_len = 0;  // longest common substring, max over aliases
  std::optional<int> matched_alias;
};

// Length of the longest contiguous run of code points shared by a and b.
// Rolling-row dynamic programme, O(|a|*|b|) time and O(min) memory.
int longest_common_substring_len(std::u32string_view a, std::u32string_view b);
// UTF-8 convenience overload; the caller normalizes.
int longest_common_substring_len(std::string_view a, std::string_view b);

// A token matches when it shares at least min_match_len consecutive code
// points with some normalized alias. Aliases shorter than min_match_len
// must be equal to the normalized token instead.
// Throws InputError on an empty answers list or min_match_len < 1.
MatchResult token_matches(std::string_view token,
                          const std::vector<std::string>& answers,
                          int min_match_len);

// Full-answer correctness: the normalized answer contains an alias, or the
// token rule holds with a shared run at least as long as the shortest
// normalized alias (truncated generations).
bool answer_correct(std::string_view final_answer,
                    const std::vector<std::string>& answers, int min_match_len);

}  // namespace latent_recall
