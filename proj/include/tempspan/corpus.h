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

// Corpus ingestion: streaming document readers and the sentence segmenter.

#ifndef TEMPSPAN_CORPUS_H_
#define TEMPSPAN_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace tempspan {

struct Document {
  std::string doc_id;
  std::string title;
  std::string text;  // normalized: NFC, LF line ends, no NUL

  bool operator==(const Document&) const = default;
};

// Sentences longer than this (in scalars) are flagged and never masked.
inline constexpr size_t kMaxSentenceLength = 2048;

struct Sentence {
  std::string sent_id;  // "<doc_id>:<ordinal>"
  std::string doc_id;
  size_t ordinal = 0;
  std::string text;
  size_t start = 0;  // scalar offsets into Document::text, end exclusive
  size_t end = 0;
  bool over_length = false;

  bool operator==(const Sentence&) const = default;
};

std::string MakeSentenceId(std::string_view doc_id, size_t ordinal);

// NFC, CRLF/CR -> LF, NUL removal.
std::string NormalizeText(std::string_view text);

enum class InputFormat { kJsonl, kPlain };

std::optional<InputFormat> ParseInputFormat(std::string_view name);

// Streams documents from a file, one record in memory at a time.
//
// jsonl: one object per line with string fields "id", "text" and optional
// "title". Plain: documents separated by blank lines, ids "<file>:<ordinal>".
// Malformed or duplicate-id records are skipped and counted unless `strict`,
// in which case FormatError is thrown.
class DocumentReader {
 public:
  DocumentReader(const std::filesystem::path& path, InputFormat format,
                 bool strict = false);

  std::optional<Document> Next();

  size_t skipped() const { return skipped_; }
  // First few skip diagnostics, "<path>:<line>: <reason>".
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::optional<Document> NextJsonl();
  std::optional<Document> NextPlain();
  void Skip(size_t line, const std::string& reason);
  bool ClaimId(const std::string& id, size_t line);

  std::filesystem::path path_;
  std::ifstream in_;
  InputFormat format_;
  bool strict_;
  size_t line_no_ = 0;
  size_t plain_ordinal_ = 0;
  size_t skipped_ = 0;
  std::vector<std::string> diagnostics_;
  std::unordered_set<std::string> seen_ids_;
};

// Rule-based splitter. A sentence ends at '.', '!' or '?' (plus any closing
// quotes or brackets) when followed by whitespace and then an uppercase
// letter, digit or opening quote, unless the word before '.' is a known
// abbreviation or a single capital initial. A blank line always ends a
// sentence. Sentences are trimmed of surrounding whitespace.
std::vector<Sentence> SegmentSentences(const Document& doc);

}  // namespace tempspan

#endif  // TEMPSPAN_CORPUS_H_
