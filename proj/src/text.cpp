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


#include "latent_recall/text.h"

#include <fstream>
#include <sstream>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "latent_recall/types.h"

namespace latent_recall {
namespace {

const icu::Normalizer2& nfc() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) {
      throw Error(std::string("ICU NFC normalizer unavailable: ") +
                  u_errorName(status));
    }
    return n;
  }();
  return *instance;
}

icu::UnicodeString from_utf8(std::string_view text) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

icu::UnicodeString compose(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(s, status);
  if (U_FAILURE(status)) {
    throw Error(std::string("NFC normalization failed: ") +
                u_errorName(status));
  }
  return out;
}

}  // namespace

std::string normalize_text(std::string_view raw) {
  icu::UnicodeString s = compose(from_utf8(raw));
  s.toLower(icu::Locale::getRoot());
  // Lowercasing can expose new composition opportunities.
  s = compose(s);

  icu::UnicodeString collapsed;
  bool pending_space = false;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      if (!collapsed.isEmpty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      collapsed.append(static_cast<UChar>(u' '));
      pending_space = false;
    }
    collapsed.append(c);
  }
  std::string out;
  collapsed.toUTF8String(out);
  return out;
}

std::u32string to_code_points(std::string_view utf8) {
  const icu::UnicodeString s = from_utf8(utf8);
  std::u32string out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    i += U16_LENGTH(c);
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

int code_point_length(std::string_view utf8) {
  return from_utf8(utf8).countChar32();
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "a",     "about", "an",   "and",   "are",   "as",    "at",    "be",
      "been",  "but",   "by",   "can",   "could", "did",   "do",    "does",
      "for",   "from",  "had",  "has",   "have",  "he",    "her",   "his",
      "i",     "in",    "is",   "it",    "its",   "no",    "not",   "of",
      "on",    "or",    "she",  "so",    "that",  "the",   "their", "there",
      "they",  "this",  "to",   "was",   "we",    "were",  "what",  "which",
      "who",   "with",  "you"};
  return words;
}

std::set<std::string> parse_stopwords(std::string_view content) {
  std::set<std::string> words;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::string word = normalize_text(line);
    if (!word.empty()) words.insert(std::move(word));
    pos = end + 1;
  }
  return words;
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read stop-word file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_stopwords(buf.str());
}

}  // namespace latent_recall
