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

#include "tempspan/stats.h"

#include <cstdio>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "tempspan/error.h"
#include "tempspan/records.h"

namespace tempspan {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<SalientKind, kNumSalientKinds> kSalientKinds = {
    SalientKind::kEntity, SalientKind::kRegexDate};

constexpr const char* kRowNames[kNumTemporalTypes] = {"Date", "Duration", "Set", "Time"};

size_t Index(TemporalType type) { return static_cast<size_t>(type); }
size_t Index(SalientKind kind) { return static_cast<size_t>(kind); }

[[noreturn]] void ThrowDangling(const std::set<std::string>& ids, size_t spans) {
  std::string message = std::to_string(spans) + " span(s) reference unknown sentences:";
  size_t shown = 0;
  for (const std::string& id : ids) {
    if (shown++ == 20) {
      message += " ...";
      break;
    }
    message += " " + id;
  }
  throw ValidationError(message);
}

Json FractionJson(const Fraction& f) {
  Json j;
  j["numerator"] = f.numerator;
  j["denominator"] = f.denominator;
  j["value"] = f.value();
  j["percent"] = f.Percent();
  return j;
}

template <size_t N>
Json TypeCounts(const std::array<uint64_t, N>& counts) {
  Json j = Json::object();
  for (TemporalType t : kTemporalTypes) j[std::string(ToString(t))] = counts[Index(t)];
  return j;
}

template <size_t N>
void ReadTypeCounts(const Json& j, std::array<uint64_t, N>* counts) {
  for (TemporalType t : kTemporalTypes) {
    (*counts)[Index(t)] = j.at(std::string(ToString(t))).get<uint64_t>();
  }
}

std::string Cell(uint64_t v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%*llu", width, static_cast<unsigned long long>(v));
  return buf;
}

std::string Label(const char* text, int width) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-*s", width, text);
  return buf;
}

}  // namespace

double Fraction::value() const {
  return denominator == 0 ? 0.0
                          : static_cast<double>(numerator) / static_cast<double>(denominator);
}

std::string Fraction::Percent() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", value() * 100.0);
  return buf;
}

Fraction CorpusStats::EntityTemporalFraction() const {
  return {entity_sentences_with_temporal, sentences_with_entity};
}

Fraction CorpusStats::SalientTemporalFraction() const {
  return {salient_sentences_with_temporal, salient_sentences};
}

void CorpusStats::AddSentence(std::span<const TemporalSpan> temporal,
                              std::span<const SalientSpan> salient) {
  std::array<bool, kNumTemporalTypes> has_type{};
  std::array<bool, kNumSalientKinds> has_kind{};
  for (const TemporalSpan& span : temporal) {
    has_type[Index(span.type)] = true;
    ++spans_by_type[Index(span.type)];
  }
  for (const SalientSpan& span : salient) has_kind[Index(span.kind)] = true;
  const bool any_temporal = !temporal.empty();
  const bool entity = has_kind[Index(SalientKind::kEntity)];
  const bool regex_date = has_kind[Index(SalientKind::kRegexDate)];

  ++total_sentences;
  for (size_t t = 0; t < kNumTemporalTypes; ++t) {
    if (!has_type[t]) continue;
    ++sentences_with_type[t];
    for (size_t k = 0; k < kNumSalientKinds; ++k) {
      if (has_kind[k]) ++cooccurrence[k][t];
    }
  }
  if (any_temporal) ++sentences_with_temporal;
  if (entity) ++sentences_with_entity;
  if (regex_date) ++sentences_with_regex_date;
  if (entity && any_temporal) ++entity_sentences_with_temporal;
  if (entity || regex_date) {
    ++salient_sentences;
    if (any_temporal) ++salient_sentences_with_temporal;
  }
}

CorpusStats& CorpusStats::Merge(const CorpusStats& o) {
  total_sentences += o.total_sentences;
  for (size_t t = 0; t < kNumTemporalTypes; ++t) {
    sentences_with_type[t] += o.sentences_with_type[t];
    spans_by_type[t] += o.spans_by_type[t];
    for (size_t k = 0; k < kNumSalientKinds; ++k) cooccurrence[k][t] += o.cooccurrence[k][t];
  }
  sentences_with_temporal += o.sentences_with_temporal;
  sentences_with_entity += o.sentences_with_entity;
  sentences_with_regex_date += o.sentences_with_regex_date;
  entity_sentences_with_temporal += o.entity_sentences_with_temporal;
  salient_sentences += o.salient_sentences;
  salient_sentences_with_temporal += o.salient_sentences_with_temporal;
  return *this;
}

CorpusStats ComputeStats(std::span<const Sentence> sentences,
                         std::span<const TemporalSpan> temporal,
                         std::span<const SalientSpan> salient) {
  std::unordered_map<std::string_view, size_t> index;
  index.reserve(sentences.size());
  for (size_t i = 0; i < sentences.size(); ++i) index.emplace(sentences[i].sent_id, i);

  std::vector<std::vector<TemporalSpan>> temporal_by(sentences.size());
  std::vector<std::vector<SalientSpan>> salient_by(sentences.size());
  std::set<std::string> dangling;
  size_t dangling_spans = 0;
  for (const TemporalSpan& span : temporal) {
    auto it = index.find(span.sent_id);
    if (it == index.end()) {
      dangling.insert(span.sent_id);
      ++dangling_spans;
    } else {
      temporal_by[it->second].push_back(span);
    }
  }
  for (const SalientSpan& span : salient) {
    auto it = index.find(span.sent_id);
    if (it == index.end()) {
      dangling.insert(span.sent_id);
      ++dangling_spans;
    } else {
      salient_by[it->second].push_back(span);
    }
  }
  if (!dangling.empty()) ThrowDangling(dangling, dangling_spans);

  CorpusStats stats;
  for (size_t i = 0; i < sentences.size(); ++i) stats.AddSentence(temporal_by[i], salient_by[i]);
  return stats;
}

CorpusStats ComputeStatsFromFiles(const std::filesystem::path& sentences,
                                  const std::filesystem::path& temporal,
                                  const std::filesystem::path& salient) {
  SentenceReader sentence_reader(sentences);
  TemporalSpanReader temporal_reader(temporal);
  SalientSpanReader salient_reader(salient);
  std::optional<TemporalSpan> next_temporal = temporal_reader.Next();
  std::optional<SalientSpan> next_salient = salient_reader.Next();

  CorpusStats stats;
  std::vector<TemporalSpan> t;
  std::vector<SalientSpan> s;
  while (std::optional<Sentence> sentence = sentence_reader.Next()) {
    t.clear();
    s.clear();
    while (next_temporal && next_temporal->sent_id == sentence->sent_id) {
      t.push_back(std::move(*next_temporal));
      next_temporal = temporal_reader.Next();
    }
    while (next_salient && next_salient->sent_id == sentence->sent_id) {
      s.push_back(std::move(*next_salient));
      next_salient = salient_reader.Next();
    }
    stats.AddSentence(t, s);
  }

  std::set<std::string> dangling;
  size_t dangling_spans = 0;
  for (; next_temporal; next_temporal = temporal_reader.Next()) {
    dangling.insert(next_temporal->sent_id);
    ++dangling_spans;
  }
  for (; next_salient; next_salient = salient_reader.Next()) {
    dangling.insert(next_salient->sent_id);
    ++dangling_spans;
  }
  if (!dangling.empty()) ThrowDangling(dangling, dangling_spans);
  return stats;
}

std::optional<std::string> OrderingWarning(const CorpusStats& stats) {
  const uint64_t date = stats.sentences_with_type[Index(TemporalType::kDate)];
  for (TemporalType t : kTemporalTypes) {
    if (t == TemporalType::kDate) continue;
    const uint64_t other = stats.sentences_with_type[Index(t)];
    if (other >= date) {
      return "Date is not the most frequent temporal type (" + std::to_string(date) +
             " Date vs " + std::to_string(other) + " " + kRowNames[Index(t)] +
             " sentences); expected Date > Duration, Time, Set on encyclopedic text";
    }
  }
  return std::nullopt;
}

std::string RenderJson(const CorpusStats& stats) {
  Json j;
  j["total_sentences"] = stats.total_sentences;
  j["sentences_with_type"] = TypeCounts(stats.sentences_with_type);
  j["sentences_with_temporal"] = stats.sentences_with_temporal;
  j["sentences_with_entity"] = stats.sentences_with_entity;
  j["sentences_with_regex_date"] = stats.sentences_with_regex_date;
  Json co = Json::object();
  for (SalientKind k : kSalientKinds) {
    co[std::string(ToString(k))] = TypeCounts(stats.cooccurrence[Index(k)]);
  }
  j["cooccurrence"] = co;
  j["spans_by_type"] = TypeCounts(stats.spans_by_type);
  j["entity_sentences_with_temporal"] = stats.entity_sentences_with_temporal;
  j["fraction_entity_sentences_with_temporal"] = FractionJson(stats.EntityTemporalFraction());
  j["salient_sentences"] = stats.salient_sentences;
  j["salient_sentences_with_temporal"] = stats.salient_sentences_with_temporal;
  j["fraction_salient_sentences_with_temporal"] = FractionJson(stats.SalientTemporalFraction());
  Json warnings = Json::array();
  if (auto w = OrderingWarning(stats)) warnings.push_back(*w);
  j["warnings"] = warnings;
  return j.dump(2);
}

CorpusStats StatsFromJson(std::string_view json_text) {
  const Json j = Json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) throw FormatError("stats report is not a JSON object");
  try {
    CorpusStats s;
    s.total_sentences = j.at("total_sentences").get<uint64_t>();
    ReadTypeCounts(j.at("sentences_with_type"), &s.sentences_with_type);
    s.sentences_with_temporal = j.at("sentences_with_temporal").get<uint64_t>();
    s.sentences_with_entity = j.at("sentences_with_entity").get<uint64_t>();
    s.sentences_with_regex_date = j.at("sentences_with_regex_date").get<uint64_t>();
    for (SalientKind k : kSalientKinds) {
      ReadTypeCounts(j.at("cooccurrence").at(std::string(ToString(k))),
                     &s.cooccurrence[Index(k)]);
    }
    ReadTypeCounts(j.at("spans_by_type"), &s.spans_by_type);
    s.entity_sentences_with_temporal = j.at("entity_sentences_with_temporal").get<uint64_t>();
    s.salient_sentences = j.at("salient_sentences").get<uint64_t>();
    s.salient_sentences_with_temporal = j.at("salient_sentences_with_temporal").get<uint64_t>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("stats report: ") + e.what());
  }
}

std::string RenderTable(const CorpusStats& stats) {
  std::ostringstream out;
  out << "Sentences: " << stats.total_sentences << "\n\n";
  out << Label("", 10) << Label("   Sentences", 14) << Label("     Spans", 12)
      << Label("  Named Entity", 16) << Label("      Date", 10) << "\n";
  for (size_t t = 0; t < kNumTemporalTypes; ++t) {
    out << Label(kRowNames[t], 10) << Cell(stats.sentences_with_type[t], 12) << "  "
        << Cell(stats.spans_by_type[t], 10) << "  "
        << Cell(stats.cooccurrence[Index(SalientKind::kEntity)][t], 14) << "  "
        << Cell(stats.cooccurrence[Index(SalientKind::kRegexDate)][t], 10) << "\n";
  }
  out << Label("Any", 10) << Cell(stats.sentences_with_temporal, 12) << "\n";
  out << Label("Salient", 10) << Cell(stats.salient_sentences, 12) << "  "
      << std::string(9, ' ') + "-" << "  " << Cell(stats.sentences_with_entity, 14)
      << "  " << Cell(stats.sentences_with_regex_date, 10) << "\n\n";
  const Fraction entity = stats.EntityTemporalFraction();
  const Fraction salient = stats.SalientTemporalFraction();
  out << "Entity sentences with a temporal span: " << entity.numerator << " / "
      << entity.denominator << " (" << entity.Percent() << ")\n";
  out << "SSM examples with a temporal span: " << salient.numerator << " / "
      << salient.denominator << " (" << salient.Percent() << ")\n";
  if (auto w = OrderingWarning(stats)) out << "warning: " << *w << "\n";
  return out.str();
}

}  // namespace tempspan
