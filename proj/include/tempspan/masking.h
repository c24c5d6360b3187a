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

// Single-span corruption: each example replaces one span of a sentence with
// the sentinel and asks for the dropped text as the target.

#ifndef TEMPSPAN_MASKING_H_
#define TEMPSPAN_MASKING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tempspan/corpus.h"
#include "tempspan/span_sources.h"
#include "tempspan/temporal.h"

namespace tempspan {

inline constexpr std::string_view kSentinel = "_X_";

enum class Strategy { kTsm, kSsm, kEntities };

// "tsm", "ssm", "entities".
std::string_view ToString(Strategy strategy);
std::optional<Strategy> ParseStrategy(std::string_view name);

struct MaskedExample {
  std::string example_id;
  std::string sent_id;
  Strategy strategy = Strategy::kTsm;
  std::string span_type;  // temporal type name, "entity" or "regex_date"
  std::string inputs;
  std::string targets;
  size_t span_start = 0;
  size_t span_end = 0;

  bool operator==(const MaskedExample&) const = default;
};

struct Corruption {
  std::string inputs;
  std::string targets;
};

// inputs = text[0, start) + kSentinel + text[end, len); targets = text[start,
// end). Offsets are scalars. Throws ValidationError naming `sent_id` unless
// 0 <= start < end <= length.
Corruption Corrupt(std::string_view text, size_t start, size_t end,
                   std::string_view sent_id = {});

// One example per span, in span order.
std::vector<MaskedExample> MakeTsmExamples(const Sentence& sentence,
                                           std::span<const TemporalSpan> spans);

// Merges entity and date spans, resolves overlaps and masks one of them
// chosen uniformly under SentenceSeed(seed, sent_id). Empty when no span.
std::optional<MaskedExample> MakeSsmExample(const Sentence& sentence,
                                            std::span<const SalientSpan> entities,
                                            std::span<const SalientSpan> dates,
                                            uint64_t seed);

// Entity-only variant: date spans are removed before the choice, and so is
// every entity span that overlaps a date.
std::optional<MaskedExample> MakeEntitiesExample(
    const Sentence& sentence, std::span<const SalientSpan> entities,
    uint64_t seed, std::span<const SalientSpan> dates = {});

// 128-bit fingerprint of (inputs, targets), for duplicate detection.
struct ExampleFingerprint {
  uint64_t a = 0;
  uint64_t b = 0;
  bool operator==(const ExampleFingerprint&) const = default;
};

struct ExampleFingerprintHash {
  size_t operator()(const ExampleFingerprint& f) const {
    return static_cast<size_t>(f.a ^ (f.b * 0x9e3779b97f4a7c15ULL));
  }
};

ExampleFingerprint Fingerprint(const MaskedExample& example);

// Per-sentence generator seed, independent of corpus order.
uint64_t SentenceSeed(uint64_t global_seed, std::string_view sent_id);

// Uniform draw from [0, n) for a seed; identical on every platform.
size_t UniformIndex(uint64_t seed, size_t n);

}  // namespace tempspan

#endif  // TEMPSPAN_MASKING_H_
