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

// Brute-force reference implementations used only by tests. They follow
// the definitions literally and share no code with the library.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace latent_recall::oracle {

// Longest common substring by enumerating every substring of a.
template <typename Str>
int brute_lcs(const Str& a, const Str& b) {
  int best = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t len = 1; i + len <= a.size(); ++len) {
      if (b.find(a.substr(i, len)) != Str::npos) {
        best = std::max(best, static_cast<int>(len));
      }
    }
  }
  return best;
}

// Repetition rule by direct enumeration of every period and start: counts
// back-to-back copies of text[start, start + period) by substring compare.
template <typename Str>
bool brute_repetitive(const Str& text, int max_period, int min_repeats,
                      int min_coverage_percent) {
  const std::size_t n = text.size();
  for (std::size_t p = 1; p <= static_cast<std::size_t>(max_period); ++p) {
    for (std::size_t start = 0; start + p <= n; ++start) {
      const Str unit = text.substr(start, p);
      std::size_t copies = 1;
      while (start + (copies + 1) * p <= n &&
             text.substr(start + copies * p, p) == unit) {
        ++copies;
      }
      const double coverage = static_cast<double>(copies * p) / n;
      if (copies >= static_cast<std::size_t>(min_repeats) &&
          coverage * 100.0 >= min_coverage_percent - 1e-9) {
        return true;
      }
    }
  }
  return false;
}

// Fraction of ranks present and <= k, by explicit counting.
inline double count_hits(const std::vector<std::optional<int>>& ranks, int k) {
  int hits = 0;
  for (const auto& r : ranks) {
    if (r.has_value()) {
      if (r.value() <= k) hits = hits + 1;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

struct EntitySlice {
  std::map<std::string, int> bucket;  // entity -> 0 head, 1 torso, 2 tail
  int head = 0;
  int torso = 0;
  int tail = 0;
};

// Sort-and-slice with integer arithmetic for fractions given in tenths:
// head gets ceil(E * head_tenths / 10) entities, torso the next
// ceil(E * torso_tenths / 10).
inline EntitySlice sort_and_slice(
    const std::vector<std::pair<std::string, double>>& entity_popularity,
    int head_tenths, int torso_tenths) {
  std::map<std::string, double> best;
  for (const auto& [e, p] : entity_popularity) {
    auto it = best.find(e);
    if (it == best.end() || p > it->second) best[e] = p;
  }
  std::vector<std::tuple<double, std::string>> keyed;
  for (const auto& [e, p] : best) keyed.emplace_back(-p, e);
  std::sort(keyed.begin(), keyed.end());
  const int total = static_cast<int>(keyed.size());
  const int head = std::min(total, (total * head_tenths + 9) / 10);
  const int torso = std::min(total - head, (total * torso_tenths + 9) / 10);
  EntitySlice out;
  for (int i = 0; i < total; ++i) {
    const int b = i < head ? 0 : (i < head + torso ? 1 : 2);
    out.bucket[std::get<1>(keyed[static_cast<std::size_t>(i)])] = b;
  }
  out.head = head;
  out.torso = torso;
  out.tail = total - head - torso;
  return out;
}

}  // namespace latent_recall::oracle
