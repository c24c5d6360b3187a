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

// Rule-based temporal expression tagger producing Date, Duration, Set and
// Time spans.
//
// A rule is a token pattern: whitespace-separated elements, each matching one
// token of the sentence (see Tokenize):
//
//   word         literal, case-insensitive ("every", ",", "o'clock")
//   @class       built-in token class (@month, @day, @year, @cardinal, ...)
//   #lo-hi       all-digit token with integer value in [lo, hi]
//   /regex/      ECMAScript regex, case-insensitive, full match on the token
//   a|b|@c       alternation of the above; may be wrapped in parentheses
//   elem?        optional element
//   \?           a literal "?" token
//
// The scan tries every rule at every token position, keeps the longest match
// per (rule, position) and resolves overlaps greedily: longer spans first,
// then higher priority, then leftmost, then earlier rule.

#ifndef TEMPSPAN_TEMPORAL_H_
#define TEMPSPAN_TEMPORAL_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempspan/corpus.h"

namespace tempspan {

enum class TemporalType { kDate, kDuration, kSet, kTime };

inline constexpr std::array<TemporalType, 4> kTemporalTypes = {
    TemporalType::kDate, TemporalType::kDuration, TemporalType::kSet,
    TemporalType::kTime};

// "date", "duration", "set", "time".
std::string_view ToString(TemporalType type);
std::optional<TemporalType> ParseTemporalType(std::string_view name);

struct TemporalSpan {
  std::string sent_id;
  TemporalType type = TemporalType::kDate;
  size_t start = 0;  // scalar offsets into the sentence text
  size_t end = 0;
  std::string surface;
  std::string rule_id;

  bool operator==(const TemporalSpan&) const = default;
};

struct RuleSpec {
  std::string rule_id;
  TemporalType type = TemporalType::kDate;
  int priority = 0;
  std::string pattern;
  // Part of the calendar-date family that also backs regex date detection.
  bool salient_date = false;

  bool operator==(const RuleSpec&) const = default;
};

// Immutable compiled rule list; cheap to copy and safe to share across
// threads.
class RuleSet {
 public:
  // Throws ValidationError on duplicate rule ids, empty or malformed
  // patterns and unknown classes.
  static RuleSet Compile(std::vector<RuleSpec> specs);

  // {"rules": [{"rule_id", "type", "priority", "pattern", "salient_date"?}]}
  static RuleSet FromJson(std::string_view json_text);
  static RuleSet LoadFile(const std::filesystem::path& path);

  // The compiled-in grammar.
  static const RuleSet& Default();
  static const std::vector<RuleSpec>& DefaultSpecs();

  const std::vector<RuleSpec>& specs() const;
  size_t size() const { return specs().size(); }

  // Canonical JSON form, loadable with FromJson.
  std::string ToJson() const;

  struct Compiled;
  const Compiled& compiled() const { return *compiled_; }

 private:
  explicit RuleSet(std::shared_ptr<const Compiled> compiled)
      : compiled_(std::move(compiled)) {}

  std::shared_ptr<const Compiled> compiled_;
};

// A rule match before overlap resolution.
struct SpanCandidate {
  TemporalSpan span;
  int priority = 0;
  size_t rule_index = 0;  // position in the RuleSet
};

// Greedy selection: longer first, then higher priority, then leftmost, then
// lower rule_index. Output is non-overlapping and sorted by start.
std::vector<TemporalSpan> ResolveOverlaps(std::vector<SpanCandidate> candidates);

// All raw matches, overlapping.
std::vector<SpanCandidate> MatchCandidates(std::string_view text,
                                           const RuleSet& rules);

// Non-overlapping typed spans sorted by start; sent_id left empty.
std::vector<TemporalSpan> ParseTemporal(std::string_view text,
                                        const RuleSet& rules);

std::vector<TemporalSpan> ParseTemporal(const Sentence& sentence,
                                        const RuleSet& rules);

// Whether rule `rule_id` in `rules` is flagged salient_date.
bool IsSalientDateRule(const RuleSet& rules, std::string_view rule_id);

}  // namespace tempspan

#endif  // TEMPSPAN_TEMPORAL_H_
