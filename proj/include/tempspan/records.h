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

// jsonl wire formats. Field order is fixed so files are byte-reproducible.
//
//   sentence:  {"sent_id","doc_id","ordinal","text","start","end","over_length"}
//   temporal:  {"sent_id","type","start","end","surface","rule_id"}
//   salient:   {"sent_id","kind","start","end","surface","label"}
//   example:   {"example_id","sent_id","strategy","span_type","inputs",
//               "targets","span_start","span_end"}

#ifndef TEMPSPAN_RECORDS_H_
#define TEMPSPAN_RECORDS_H_

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>

#include "tempspan/corpus.h"
#include "tempspan/error.h"
#include "tempspan/masking.h"
#include "tempspan/span_sources.h"
#include "tempspan/temporal.h"

namespace tempspan {

// One JSON object, no trailing newline.
std::string ToJsonLine(const Sentence& sentence);
std::string ToJsonLine(const TemporalSpan& span);
std::string ToJsonLine(const SalientSpan& span);
std::string ToJsonLine(const MaskedExample& example);

// Throw FormatError on schema violations.
Sentence SentenceFromJson(std::string_view line);
TemporalSpan TemporalSpanFromJson(std::string_view line);
SalientSpan SalientSpanFromJson(std::string_view line);
MaskedExample MaskedExampleFromJson(std::string_view line);

// Line reader that skips blank lines and tracks line numbers.
class JsonlReader {
 public:
  explicit JsonlReader(const std::filesystem::path& path);

  // False at end of file.
  bool Next(std::string* line);
  size_t line_number() const { return line_no_; }
  const std::filesystem::path& path() const { return path_; }
  // "<path>:<line>: " for error messages.
  std::string Where() const;

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  size_t line_no_ = 0;
};

// Reads typed records, prefixing parse errors with file and line.
template <typename T, T (*Parse)(std::string_view)>
class RecordReader {
 public:
  explicit RecordReader(const std::filesystem::path& path) : lines_(path) {}

  std::optional<T> Next() {
    std::string line;
    if (!lines_.Next(&line)) return std::nullopt;
    try {
      return Parse(line);
    } catch (const std::exception& e) {
      throw FormatError(lines_.Where() + e.what());
    }
  }

 private:
  JsonlReader lines_;
};

using SentenceReader = RecordReader<Sentence, SentenceFromJson>;
using TemporalSpanReader = RecordReader<TemporalSpan, TemporalSpanFromJson>;
using SalientSpanReader = RecordReader<SalientSpan, SalientSpanFromJson>;
using ExampleReader = RecordReader<MaskedExample, MaskedExampleFromJson>;

// Opens `path` for writing, throwing IoError on failure.
std::ofstream OpenOutput(const std::filesystem::path& path);

}  // namespace tempspan

#endif  // TEMPSPAN_RECORDS_H_
