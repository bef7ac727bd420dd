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


#include "latent_recall/matcher.h"

#include <algorithm>
#include <limits>

#include "latent_recall/text.h"
#include "latent_recall/types.h"

namespace latent_recall {

int longest_common_substring_len(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return 0;
  // run[j + 1]: length of the common suffix of a[..i] and b[..j].
  std::vector<int> run(b.size() + 1, 0);
  int best = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = b.size(); j-- > 0;) {
      if (a[i] == b[j]) {
        run[j + 1] = run[j] + 1;
        best = std::max(best, run[j + 1]);
      } else {
        run[j + 1] = 0;
      }
    }
  }
  return best;
}

int longest_common_substring_len(std::string_view a, std::string_view b) {
  return longest_common_substring_len(to_code_points(a), to_code_points(b));
}

MatchResult token_matches(std::string_view token,
                          const std::vector<std::string>& answers,
                          int min_match_len) {
  if (answers.empty()) throw InputError("token_matches: empty answers list");
  if (min_match_len < 1) throw InputError("token_matches: min_match_len < 1");

  const std::string norm_token = normalize_text(token);
  const std::u32string token_cps = to_code_points(norm_token);

  MatchResult result;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    const std::string alias = normalize_text(answers[i]);
    const std::u32string alias_cps = to_code_points(alias);
    const int shared = longest_common_substring_len(token_cps, alias_cps);
    result.shared_len = std::max(result.shared_len, shared);

    bool hit;
    if (static_cast<int>(alias_cps.size()) < min_match_len) {
      hit = norm_token == alias;
    } else {
      hit = shared >= min_match_len;
    }
    if (hit && !result.matched_alias) {
      result.matched = true;
      result.matched_alias = static_cast<int>(i);
    }
  }
  return result;
}

bool answer_correct(std::string_view final_answer,
                    const std::vector<std::string>& answers,
                    int min_match_len) {
  if (answers.empty()) throw InputError("answer_correct: empty answers list");
  const std::string norm_answer = normalize_text(final_answer);
  int shortest = std::numeric_limits<int>::max();
  for (const auto& raw : answers) {
    const std::string alias = normalize_text(raw);
    if (!alias.empty() && norm_answer.find(alias) != std::string::npos) {
      return true;
    }
    shortest = std::min(shortest, code_point_length(alias));
  }
  const MatchResult fallback =
      token_matches(norm_answer, answers, min_match_len);
  return fallback.matched && fallback.shared_len >= shortest;
}

}  // namespace latent_recall
