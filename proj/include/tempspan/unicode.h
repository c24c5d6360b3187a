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

// UTF-8 helpers. All offsets exposed by the toolkit count Unicode scalar
// values, while strings are stored as UTF-8; these functions convert between
// the two views.

#ifndef TEMPSPAN_UNICODE_H_
#define TEMPSPAN_UNICODE_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace tempspan::unicode {

// Decodes UTF-8. Ill-formed sequences decode to U+FFFD, one per bad byte.
std::u32string Decode(std::string_view utf8);

std::string Encode(std::u32string_view text);
void AppendUtf8(char32_t c, std::string* out);

// Number of scalar values in `utf8`.
size_t Length(std::string_view utf8);

// Byte offset of scalar index `index` (clamped to the end of the string).
size_t ByteOffset(std::string_view utf8, size_t index);

// Substring [start, end) in scalar offsets.
std::string Slice(std::string_view utf8, size_t start, size_t end);

// NFC normalization. Invalid UTF-8 is repaired with U+FFFD first.
std::string NormalizeNfc(std::string_view utf8);

bool IsUpper(char32_t c);  // uppercase or titlecase letter
bool IsSpace(char32_t c);  // Unicode White_Space
bool IsAlnum(char32_t c);

// ASCII-only lowercase; other bytes are copied unchanged.
std::string AsciiLower(std::string_view text);

}  // namespace tempspan::unicode

#endif  // TEMPSPAN_UNICODE_H_
