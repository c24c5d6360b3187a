// Copyright 2026 The tempspan Authors.
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

#include "tempspan/tokenizer.h"

#include <algorithm>
#include <array>

#include "tempspan/unicode.h"

namespace tempspan {
namespace {

constexpr std::u32string_view kLeading = U"\"'([{“‘«";
constexpr std::u32string_view kTrailing = U"\"')]}”’»,;:!?.";

constexpr std::array<std::string_view, 12> kMonthAbbreviations = {
    "jan.", "feb.", "mar.", "apr.", "jun.", "jul.",
    "aug.", "sep.", "sept.", "oct.", "nov.", "dec.",
};

// Whether the final '.' of text[a, b) belongs to the word.
bool KeepsPeriod(const std::u32string& text, size_t a, size_t b) {
  if (b - a < 2 || !unicode::IsAlnum(text[b - 2])) return false;
  for (size_t i = a; i + 1 < b; ++i) {
    if (text[i] == '.') return true;  // dotted form: a.m., U.S.
  }
  if (b - a > 5) return false;
  std::string word = unicode::AsciiLower(
      unicode::Encode(std::u32string_view(text).substr(a, b - a)));
  return std::find(kMonthAbbreviations.begin(), kMonthAbbreviations.end(),
                   word) != kMonthAbbreviations.end();
}

void Push(const std::u32string& text, size_t a, size_t b,
          std::vector<Token>* out) {
  Token t;
  t.start = a;
  t.end = b;
  t.text = unicode::Encode(std::u32string_view(text).substr(a, b - a));
  t.lower = unicode::AsciiLower(t.text);
  t.capitalized = unicode::IsUpper(text[a]);
  out->push_back(std::move(t));
}

}  // namespace

std::vector<Token> Tokenize(std::string_view sentence) {
  const std::u32string text = unicode::Decode(sentence);
  std::vector<Token> out;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    while (i < n && unicode::IsSpace(text[i])) ++i;
    if (i == n) break;
    size_t a = i;
    while (i < n && !unicode::IsSpace(text[i])) ++i;
    size_t b = i;

    while (a < b && kLeading.find(text[a]) != std::u32string_view::npos) {
      Push(text, a, a + 1, &out);
      ++a;
    }
    size_t trail = b;
    while (trail > a &&
           kTrailing.find(text[trail - 1]) != std::u32string_view::npos) {
      if (text[trail - 1] == '.' && KeepsPeriod(text, a, trail)) break;
      --trail;
    }
    if (a < trail) Push(text, a, trail, &out);
    for (size_t k = trail; k < b; ++k) Push(text, k, k + 1, &out);
  }
  return out;
}

}  // namespace tempspan
