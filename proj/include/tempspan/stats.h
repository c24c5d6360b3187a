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

// Sentence-level span statistics and their reports.

#ifndef TEMPSPAN_STATS_H_
#define TEMPSPAN_STATS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tempspan/corpus.h"
#include "tempspan/span_sources.h"
#include "tempspan/temporal.h"

namespace tempspan {

struct Fraction {
  uint64_t numerator = 0;
  uint64_t denominator = 0;

  // 0 when the denominator is 0.
  double value() const;
  // "12.34%".
  std::string Percent() const;

  bool operator==(const Fraction&) const = default;
};

inline constexpr size_t kNumTemporalTypes = 4;
inline constexpr size_t kNumSalientKinds = 2;

// All counts are of sentences, except spans_by_type.
struct CorpusStats {
  uint64_t total_sentences = 0;
  std::array<uint64_t, kNumTemporalTypes> sentences_with_type{};
  uint64_t sentences_with_temporal = 0;
  uint64_t sentences_with_entity = 0;
  uint64_t sentences_with_regex_date = 0;
  // [salient kind][temporal type]: sentences with both.
  std::array<std::array<uint64_t, kNumTemporalTypes>, kNumSalientKinds> cooccurrence{};
  uint64_t entity_sentences_with_temporal = 0;
  // Sentences with any salient span, i.e. one SSM example each.
  uint64_t salient_sentences = 0;
  uint64_t salient_sentences_with_temporal = 0;
  // Temporal spans, i.e. TSM examples, per type.
  std::array<uint64_t, kNumTemporalTypes> spans_by_type{};

  // Entity-bearing sentences with >= 1 temporal span of any type.
  Fraction EntityTemporalFraction() const;
  // SSM examples (salient-bearing sentences) with >= 1 temporal span.
  Fraction SalientTemporalFraction() const;

  // Counts one sentence given all of its spans.
  void AddSentence(std::span<const TemporalSpan> temporal,
                   std::span<const SalientSpan> salient);

  // Sums counts; commutative and associative.
  CorpusStats& Merge(const CorpusStats& other);

  bool operator==(const CorpusStats&) const = default;
};

// Groups spans by sent_id. Throws ValidationError listing span sent_ids that
// name no sentence.
CorpusStats ComputeStats(std::span<const Sentence> sentences,
                         std::span<const TemporalSpan> temporal,
                         std::span<const SalientSpan> salient);

// Streaming form over jsonl files. Span files must list spans grouped by
// sentence in sentence-file order (as `parse` writes them); spans that cannot
// be matched that way are reported as dangling.
CorpusStats ComputeStatsFromFiles(const std::filesystem::path& sentences,
                                  const std::filesystem::path& temporal,
                                  const std::filesystem::path& salient);

// Set when Date is not strictly the most frequent temporal type.
std::optional<std::string> OrderingWarning(const CorpusStats& stats);

// Machine-readable report. Fractions carry numerator, denominator, value and
// percent; warnings are included.
std::string RenderJson(const CorpusStats& stats);
// Inverse of RenderJson (derived fields are ignored). Throws FormatError.
CorpusStats StatsFromJson(std::string_view json_text);

// Plain-text tables: rows are temporal types, columns salient kinds.
std::string RenderTable(const CorpusStats& stats);

}  // namespace tempspan

#endif  // TEMPSPAN_STATS_H_
