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

#include <set>
#include <string>
#include <string_view>

namespace latent_recall {

// NFC composition, lowercasing, trimming and whitespace collapsing.
// Idempotent. Invalid UTF-8 sequences become U+FFFD.
std::string normalize_text(std::string_view raw);

// Decodes UTF-8 into Unicode scalar values.
std::u32string to_code_points(std::string_view utf8);

// Number of Unicode scalar values in a UTF-8 string.
int code_point_length(std::string_view utf8);

// The shipped English function-word list (also in data/stopwords_en.txt).
const std::set<std::string>& default_stopwords();

// Reads a stop-word file: one word per line, '#' starts a comment.
// Entries are normalized. Throws InputError if the file cannot be read.
std::set<std::string> load_stopwords(const std::string& path);
std::set<std::string> parse_stopwords(std::string_view content);

}  // namespace latent_recall
