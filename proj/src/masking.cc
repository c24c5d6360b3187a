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

#include "tempspan/masking.h"

#include <algorithm>
#include <limits>
#include <random>

#include "tempspan/error.h"
#include "tempspan/unicode.h"

namespace tempspan {
namespace {

uint64_t Fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::optional<MaskedExample> MaskOne(const Sentence& sentence,
                                     const std::vector<SalientSpan>& pool,
                                     Strategy strategy, uint64_t seed) {
  if (pool.empty()) return std::nullopt;
  const size_t pick = UniformIndex(SentenceSeed(seed, sentence.sent_id), pool.size());
  const SalientSpan& span = pool[pick];
  Corruption c = Corrupt(sentence.text, span.start, span.end, sentence.sent_id);
  MaskedExample ex;
  ex.example_id = sentence.sent_id + "#" + std::string(ToString(strategy));
  ex.sent_id = sentence.sent_id;
  ex.strategy = strategy;
  ex.span_type = std::string(ToString(span.kind));
  ex.inputs = std::move(c.inputs);
  ex.targets = std::move(c.targets);
  ex.span_start = span.start;
  ex.span_end = span.end;
  return ex;
}

}  // namespace

std::string_view ToString(Strategy strategy) {
  switch (strategy) {
    case Strategy::kTsm:
      return "tsm";
    case Strategy::kSsm:
      return "ssm";
    case Strategy::kEntities:
      return "entities";
  }
  return "tsm";
}

std::optional<Strategy> ParseStrategy(std::string_view name) {
  const std::string lower = unicode::AsciiLower(name);
  for (Strategy s : {Strategy::kTsm, Strategy::kSsm, Strategy::kEntities}) {
    if (ToString(s) == lower) return s;
  }
  return std::nullopt;
}

Corruption Corrupt(std::string_view text, size_t start, size_t end,
                   std::string_view sent_id) {
  const size_t length = unicode::Length(text);
  if (start >= end || end > length) {
    throw ValidationError("cannot mask [" + std::to_string(start) + "," +
                          std::to_string(end) + ") in sentence '" +
                          std::string(sent_id) + "' of length " +
                          std::to_string(length));
  }
  const size_t b = unicode::ByteOffset(text, start);
  const size_t e = unicode::ByteOffset(text, end);
  Corruption c;
  c.targets = std::string(text.substr(b, e - b));
  c.inputs.reserve(text.size() - c.targets.size() + kSentinel.size());
  c.inputs.append(text.substr(0, b));
  c.inputs.append(kSentinel);
  c.inputs.append(text.substr(e));
  return c;
}

std::vector<MaskedExample> MakeTsmExamples(const Sentence& sentence,
                                           std::span<const TemporalSpan> spans) {
  std::vector<MaskedExample> out;
  out.reserve(spans.size());
  for (size_t k = 0; k < spans.size(); ++k) {
    const TemporalSpan& span = spans[k];
    Corruption c = Corrupt(sentence.text, span.start, span.end, sentence.sent_id);
    MaskedExample ex;
    ex.example_id = sentence.sent_id + "#tsm:" + std::to_string(k);
    ex.sent_id = sentence.sent_id;
    ex.strategy = Strategy::kTsm;
    ex.span_type = std::string(ToString(span.type));
    ex.inputs = std::move(c.inputs);
    ex.targets = std::move(c.targets);
    ex.span_start = span.start;
    ex.span_end = span.end;
    out.push_back(std::move(ex));
  }
  return out;
}

std::optional<MaskedExample> MakeSsmExample(const Sentence& sentence,
                                            std::span<const SalientSpan> entities,
                                            std::span<const SalientSpan> dates,
                                            uint64_t seed) {
  std::vector<SalientSpan> merged(entities.begin(), entities.end());
  merged.insert(merged.end(), dates.begin(), dates.end());
  return MaskOne(sentence, ResolveSalientOverlaps(std::move(merged)),
                 Strategy::kSsm, seed);
}

std::optional<MaskedExample> MakeEntitiesExample(
    const Sentence& sentence, std::span<const SalientSpan> entities,
    uint64_t seed, std::span<const SalientSpan> dates) {
  std::vector<SalientSpan> pool;
  for (const SalientSpan& e : entities) {
    if (e.kind != SalientKind::kEntity) continue;
    const bool touches_date = std::any_of(dates.begin(), dates.end(), [&e](const SalientSpan& d) {
      return e.start < d.end && d.start < e.end;
    });
    if (!touches_date) pool.push_back(e);
  }
  return MaskOne(sentence, ResolveSalientOverlaps(std::move(pool)),
                 Strategy::kEntities, seed);
}

ExampleFingerprint Fingerprint(const MaskedExample& e) {
  uint64_t a = Fnv1a64(e.inputs);
  a = Fnv1a64(std::string_view("\0", 1), a);
  a = Fnv1a64(e.targets, a);
  uint64_t b = Fnv1a64(e.targets, 0x84222325cbf29ce4ULL);
  b = Fnv1a64(std::string_view("\x1f", 1), b);
  b = Fnv1a64(e.inputs, b);
  return {a, b};
}

uint64_t SentenceSeed(uint64_t global_seed, std::string_view sent_id) {
  return SplitMix64(SplitMix64(global_seed) ^ Fnv1a64(sent_id));
}

size_t UniformIndex(uint64_t seed, size_t n) {
  if (n <= 1) return 0;
  std::mt19937_64 engine(seed);
  const uint64_t bound = static_cast<uint64_t>(n);
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % bound;
  uint64_t x = engine();
  while (x >= limit) x = engine();
  return static_cast<size_t>(x % bound);
}

}  // namespace tempspan
