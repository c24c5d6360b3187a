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

// Salient spans for SSM-style masking: regex-family dates and named entities
// read from annotation files or approximated from capitalization.

#ifndef TEMPSPAN_SPAN_SOURCES_H_
#define TEMPSPAN_SPAN_SOURCES_H_

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tempspan/corpus.h"
#include "tempspan/temporal.h"

namespace tempspan {

enum class SalientKind { kEntity, kRegexDate };

// "entity", "regex_date".
std::string_view ToString(SalientKind kind);
std::optional<SalientKind> ParseSalientKind(std::string_view name);

// Label given to entity spans produced by HeuristicEntities.
inline constexpr std::string_view kHeuristicLabel = "HEURISTIC";

struct SalientSpan {
  std::string sent_id;
  SalientKind kind = SalientKind::kEntity;
  size_t start = 0;  // scalar offsets into the sentence text
  size_t end = 0;
  std::string surface;
  std::string label;  // NER label for entities; empty for dates

  bool operator==(const SalientSpan&) const = default;
};

// Regex-family dates: the Date spans of a full parse whose rule is flagged
// salient_date. Always a subset of ParseTemporal's Date output.
std::vector<SalientSpan> DetectDates(std::string_view text,
                                     const RuleSet& rules = RuleSet::Default());

// Same, reusing an existing parse of the sentence.
std::vector<SalientSpan> DatesFromTemporal(std::span<const TemporalSpan> spans,
                                           const RuleSet& rules);

struct HeuristicOptions {
  // Two-pass mode: words seen capitalized mid-sentence elsewhere in the corpus
  // (ASCII-lowercased). A lone sentence-initial word in this set is kept.
  const std::unordered_set<std::string>* mid_sentence_capitalized = nullptr;
};

// Approximate entities: maximal runs of capitalized tokens. Month and weekday
// names, "I", punctuation and tokens overlapping `claimed` spans break runs.
// The sentence-initial token is dropped from its run when the run is only
// that token, or when it is a function word ("The", "In", ...). A trailing
// possessive "'s" is not part of the span. Labelled kHeuristicLabel.
std::vector<SalientSpan> HeuristicEntities(
    std::string_view text, std::span<const TemporalSpan> claimed = {},
    const HeuristicOptions& options = {});

// Sort by start and drop overlaps: longer first, then leftmost, then
// RegexDate before Entity.
std::vector<SalientSpan> ResolveSalientOverlaps(std::vector<SalientSpan> spans);

// Entity annotations keyed by sent_id, loaded from jsonl records
// {"sent_id": str, "spans": [{"start": int, "end": int, "label": str}]}.
//
// Spans are validated against the sentence when it is resolved: spans out of
// bounds, empty or overlapping are skipped and counted (strict: thrown).
// Resolve is safe to call concurrently.
class EntityAnnotations {
 public:
  static EntityAnnotations Load(const std::filesystem::path& path,
                                bool strict = false);

  // Validated entity spans for `sentence`; empty when it has no record.
  std::vector<SalientSpan> Resolve(const Sentence& sentence) const;

  bool Contains(std::string_view sent_id) const;
  size_t record_count() const { return records_->size(); }
  // Malformed records at load plus invalid spans seen by Resolve.
  size_t error_count() const;
  std::vector<std::string> diagnostics() const;
  // Record ids never passed to Resolve, sorted.
  std::vector<std::string> Unresolved() const;

 private:
  struct RawSpan {
    long long start;
    long long end;
    std::string label;
  };
  struct Record {
    std::vector<RawSpan> spans;
    mutable std::atomic<bool> resolved{false};
  };
  struct Diagnostics;

  EntityAnnotations();
  void Report(std::string message) const;

  std::shared_ptr<std::unordered_map<std::string, Record>> records_;
  std::shared_ptr<Diagnostics> diagnostics_;
  bool strict_ = false;
};

// Validated map over a segmented corpus (the whole map in memory).
std::map<std::string, std::vector<SalientSpan>> LoadEntityAnnotations(
    const std::filesystem::path& path, std::span<const Sentence> sentences,
    bool strict = false, size_t* error_count = nullptr);

// Writes the jsonl form read by EntityAnnotations::Load.
void WriteEntityAnnotations(
    std::ostream& out,
    const std::map<std::string, std::vector<SalientSpan>>& annotations);

}  // namespace tempspan

#endif  // TEMPSPAN_SPAN_SOURCES_H_
