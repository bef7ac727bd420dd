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

#include <string>
#include <string_view>

#include "latent_recall/types.h"

namespace latent_recall {

enum class FilterReason { kNone, kUnsPrefix, kEmpty, kTooShort, kStopwordOnly };

std::string_view to_string(FilterReason reason);
FilterReason parse_filter_reason(std::string_view text);

struct FilterVerdict {
  bool uninformative = false;
  FilterReason reason = FilterReason::kNone;

  friend bool operator==(const FilterVerdict&, const FilterVerdict&) = default;
};

// Rules are tried in a fixed order on the normalized token:
// empty, configured prefix, shorter than min_token_len, stop words only.
FilterVerdict is_uninformative_token(std::string_view token,
                                     const MetricConfig& config);

// Longest back-to-back repetition of a unit of `period` code points found
// anywhere in text, returned as the number of repeats.
int max_tandem_repeats(std::u32string_view text, int period);

// True when the repetition rule fires on already-normalized text.
bool is_repetitive(std::u32string_view text, const RepetitionRule& rule);

enum class ResponseKind { kInformative, kUninformative };

// Empty, "unsure"-style prefix, or repetitive junk.
ResponseKind classify_response(std::string_view final_answer,
                               const MetricConfig& config);

// Three-way split. A correct answer wins over the uninformative checks.
ResponseClass classify_outcome(std::string_view final_answer,
                               const std::vector<std::string>& answers,
                               const MetricConfig& config);

}  // namespace latent_recall
