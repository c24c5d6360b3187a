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

#ifndef TEMPSPAN_TOKENIZER_H_
#define TEMPSPAN_TOKENIZER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tempspan {

struct Token {
  size_t start = 0;  // scalar offsets into the sentence, end exclusive
  size_t end = 0;
  std::string text;
  std::string lower;  // ASCII-lowercased text
  bool capitalized = false;  // first scalar is an uppercase/titlecase letter
};

// Whitespace tokenization with punctuation peeling: leading opening
// quotes/brackets and trailing closing quotes/brackets and sentence
// punctuation become single-character tokens. Inner punctuation stays
// ("15:30", "2020-01-15", "3-day", "U.S."); a trailing period is kept for
// dotted forms ("a.m.", "U.S.") and month abbreviations ("Jan.").
std::vector<Token> Tokenize(std::string_view sentence);

}  // namespace tempspan

#endif  // TEMPSPAN_TOKENIZER_H_
