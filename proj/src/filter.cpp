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


#include "latent_recall/filter.h"

#include <string>

#include "latent_recall/matcher.h"
#include "latent_recall/text.h"

namespace latent_recall {
namespace {

bool starts_with_any(const std::string& text,
                     const std::vector<std::string>& prefixes) {
  for (const auto& raw : prefixes) {
    const std::string prefix = normalize_text(raw);
    if (!prefix.empty() && text.starts_with(prefix)) return true;
  }
  return false;
}

bool only_stopwords(const std::string& text,
                    const std::set<std::string>& stopwords) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(' ', pos);
    if (end == std::string::npos) end = text.size();
    if (!stopwords.contains(text.substr(pos, end - pos))) return false;
    pos = end + 1;
  }
  return true;
}

// Reports the length of every maximal run of positions j with
// text[j] == text[j + period].
template <typename Visit>
void for_each_match_run(std::u32string_view text, std::size_t period,
                        Visit visit) {
  if (text.size() <= period) return;
  std::size_t run = 0;
  for (std::size_t j = 0; j + period < text.size(); ++j) {
    if (text[j] == text[j + period]) {
      ++run;
    } else {
      if (run > 0) visit(run);
      run = 0;
    }
  }
  if (run > 0) visit(run);
}

}  // namespace

std::string_view to_string(FilterReason reason) {
  switch (reason) {
    case FilterReason::kNone:
      return "none";
    case FilterReason::kUnsPrefix:
      return "uns_prefix";
    case FilterReason::kEmpty:
      return "empty";
    case FilterReason::kTooShort:
      return "too_short";
    case FilterReason::kStopwordOnly:
      return "stopword_only";
  }
  return "none";
}

FilterReason parse_filter_reason(std::string_view text) {
  if (text == "none") return FilterReason::kNone;
  if (text == "uns_prefix") return FilterReason::kUnsPrefix;
  if (text == "empty") return FilterReason::kEmpty;
  if (text == "too_short") return FilterReason::kTooShort;
  if (text == "stopword_only") return FilterReason::kStopwordOnly;
  throw InputError("unknown filter reason '" + std::string(text) + "'");
}

FilterVerdict is_uninformative_token(std::string_view token,
                                     const MetricConfig& config) {
  const std::string norm = normalize_text(token);
  FilterReason reason = FilterReason::kNone;
  if (norm.empty()) {
    reason = FilterReason::kEmpty;
  } else if (starts_with_any(norm, config.uninformative_prefixes)) {
    reason = FilterReason::kUnsPrefix;
  } else if (code_point_length(norm) < config.min_token_len) {
    reason = FilterReason::kTooShort;
  } else if (only_stopwords(norm, config.stopwords)) {
    reason = FilterReason::kStopwordOnly;
  }
  return {reason != FilterReason::kNone, reason};
}

int max_tandem_repeats(std::u32string_view text, int period) {
  if (period < 1 || text.size() < static_cast<std::size_t>(period)) return 0;
  const auto p = static_cast<std::size_t>(period);
  std::size_t best = 1;
  for_each_match_run(text, p, [&](std::size_t run) {
    best = std::max(best, (run + p) / p);
  });
  return static_cast<int>(best);
}

bool is_repetitive(std::u32string_view text, const RepetitionRule& rule) {
  const std::size_t n = text.size();
  if (n == 0) return false;
  for (int period = 1; period <= rule.max_period; ++period) {
    const auto p = static_cast<std::size_t>(period);
    bool fired = false;
    for_each_match_run(text, p, [&](std::size_t run) {
      const std::size_t repeats = (run + p) / p;
      if (repeats >= static_cast<std::size_t>(rule.min_repeats) &&
          100 * repeats * p >=
              static_cast<std::size_t>(rule.min_coverage_percent) * n) {
        fired = true;
      }
    });
    if (fired) return true;
  }
  return false;
}

ResponseKind classify_response(std::string_view final_answer,
                               const MetricConfig& config) {
  const std::string norm = normalize_text(final_answer);
  if (norm.empty() || starts_with_any(norm, config.uninformative_prefixes) ||
      is_repetitive(to_code_points(norm), config.repetition)) {
    return ResponseKind::kUninformative;
  }
  return ResponseKind::kInformative;
}

ResponseClass classify_outcome(std::string_view final_answer,
                               const std::vector<std::string>& answers,
                               const MetricConfig& config) {
  if (answer_correct(final_answer, answers, config.min_match_len)) {
    return ResponseClass::kCorrect;
  }
  if (classify_response(final_answer, config) == ResponseKind::kUninformative) {
    return ResponseClass::kUninformative;
  }
  return ResponseClass::kWrong;
}

}  // namespace latent_recall
