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

#include "tempspan/span_sources.h"

#include <algorithm>
#include <fstream>
#include <mutex>

#include "json.hpp"
#include "tempspan/error.h"
#include "tempspan/tokenizer.h"
#include "tempspan/unicode.h"

namespace tempspan {
namespace {

constexpr size_t kMaxDiagnostics = 100;

const std::unordered_set<std::string_view>& FunctionWords() {
  static const std::unordered_set<std::string_view> words = {
      "a",       "an",      "the",     "this",    "that",    "these",
      "those",   "in",      "on",      "at",      "by",      "for",
      "from",    "to",      "of",      "with",    "as",      "after",
      "before",  "during",  "since",   "until",   "when",    "while",
      "if",      "although", "though", "because", "but",     "and",
      "or",      "so",      "yet",     "however", "there",   "it",
      "its",     "he",      "she",     "they",    "we",      "you",
      "his",     "her",     "their",   "our",     "my",      "your",
      "some",    "many",    "most",    "all",     "both",    "each",
      "every",   "one",     "another", "such",    "what",    "which",
      "who",     "where",   "how",     "why",     "following", "later",
      "between", "among",   "under",   "over",    "through", "despite",
      "according", "like",  "unlike",  "also",    "then",    "here",
      "no",      "not",     "other",   "several", "upon",    "about",
      "around",  "within",  "without", "once",    "thus",    "today",
  };
  return words;
}

const std::unordered_set<std::string_view>& CalendarNames() {
  static const std::unordered_set<std::string_view> names = {
      "january", "february", "march",    "april",   "may",     "june",
      "july",    "august",   "september", "october", "november", "december",
      "jan",     "jan.",     "feb",      "feb.",    "mar",     "mar.",
      "apr",     "apr.",     "jun",      "jun.",    "jul",     "jul.",
      "aug",     "aug.",     "sep",      "sep.",    "sept",    "sept.",
      "oct",     "oct.",     "nov",      "nov.",    "dec",     "dec.",
      "monday",  "tuesday",  "wednesday", "thursday", "friday", "saturday",
      "sunday",
  };
  return names;
}

bool HasAlnum(std::string_view text) {
  for (char32_t c : unicode::Decode(text)) {
    if (unicode::IsAlnum(c)) return true;
  }
  return false;
}

bool Overlaps(const Token& t, std::span<const TemporalSpan> claimed) {
  return std::any_of(claimed.begin(), claimed.end(), [&t](const TemporalSpan& s) {
    return t.start < s.end && s.start < t.end;
  });
}

size_t PossessiveLength(std::string_view text) {
  if (text.size() > 2 && text.ends_with("'s")) return 2;
  if (text.size() > 4 && text.ends_with("\xE2\x80\x99s")) return 2;  // ’s
  return 0;
}

}  // namespace

std::string_view ToString(SalientKind kind) {
  return kind == SalientKind::kEntity ? "entity" : "regex_date";
}

std::optional<SalientKind> ParseSalientKind(std::string_view name) {
  if (name == "entity") return SalientKind::kEntity;
  if (name == "regex_date") return SalientKind::kRegexDate;
  return std::nullopt;
}

std::vector<SalientSpan> DatesFromTemporal(std::span<const TemporalSpan> spans,
                                           const RuleSet& rules) {
  std::vector<SalientSpan> out;
  for (const TemporalSpan& s : spans) {
    if (s.type != TemporalType::kDate || !IsSalientDateRule(rules, s.rule_id)) {
      continue;
    }
    out.push_back({s.sent_id, SalientKind::kRegexDate, s.start, s.end, s.surface, ""});
  }
  return out;
}

std::vector<SalientSpan> DetectDates(std::string_view text, const RuleSet& rules) {
  const std::vector<TemporalSpan> spans = ParseTemporal(text, rules);
  return DatesFromTemporal(spans, rules);
}

std::vector<SalientSpan> HeuristicEntities(std::string_view text,
                                           std::span<const TemporalSpan> claimed,
                                           const HeuristicOptions& options) {
  const std::vector<Token> tokens = Tokenize(text);
  size_t first_word = tokens.size();
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (HasAlnum(tokens[i].text)) {
      first_word = i;
      break;
    }
  }
  auto eligible = [&](const Token& t) {
    return t.capitalized && t.lower != "i" && CalendarNames().count(t.lower) == 0 &&
           !Overlaps(t, claimed);
  };

  std::vector<SalientSpan> out;
  size_t i = 0;
  while (i < tokens.size()) {
    if (!eligible(tokens[i])) {
      ++i;
      continue;
    }
    size_t a = i;
    size_t b = i;
    while (b < tokens.size() && eligible(tokens[b])) ++b;
    i = b;
    if (a == first_word) {
      const Token& head = tokens[a];
      const bool known = options.mid_sentence_capitalized != nullptr &&
                         options.mid_sentence_capitalized->count(head.lower) > 0;
      if (FunctionWords().count(head.lower) > 0 || (b - a == 1 && !known)) ++a;
    }
    if (a == b) continue;
    SalientSpan span;
    span.kind = SalientKind::kEntity;
    span.start = tokens[a].start;
    span.end = tokens[b - 1].end;
    const size_t possessive = PossessiveLength(tokens[b - 1].text);
    if (possessive > 0 && span.end - possessive > span.start) span.end -= possessive;
    span.surface = unicode::Slice(text, span.start, span.end);
    span.label = std::string(kHeuristicLabel);
    out.push_back(std::move(span));
  }
  return out;
}

std::vector<SalientSpan> ResolveSalientOverlaps(std::vector<SalientSpan> spans) {
  std::sort(spans.begin(), spans.end(), [](const SalientSpan& a, const SalientSpan& b) {
    const size_t la = a.end - a.start;
    const size_t lb = b.end - b.start;
    if (la != lb) return la > lb;
    if (a.start != b.start) return a.start < b.start;
    return a.kind == SalientKind::kRegexDate && b.kind != SalientKind::kRegexDate;
  });
  std::vector<SalientSpan> kept;
  for (SalientSpan& s : spans) {
    const bool overlaps = std::any_of(kept.begin(), kept.end(), [&s](const SalientSpan& k) {
      return s.start < k.end && k.start < s.end;
    });
    if (!overlaps) kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end(), [](const SalientSpan& a, const SalientSpan& b) {
    return a.start < b.start;
  });
  return kept;
}

struct EntityAnnotations::Diagnostics {
  std::mutex mu;
  size_t count = 0;
  std::vector<std::string> messages;
};

EntityAnnotations::EntityAnnotations()
    : records_(std::make_shared<std::unordered_map<std::string, Record>>()),
      diagnostics_(std::make_shared<Diagnostics>()) {}

void EntityAnnotations::Report(std::string message) const {
  if (strict_) throw ValidationError(message);
  std::lock_guard<std::mutex> lock(diagnostics_->mu);
  ++diagnostics_->count;
  if (diagnostics_->messages.size() < kMaxDiagnostics) {
    diagnostics_->messages.push_back(std::move(message));
  }
}

size_t EntityAnnotations::error_count() const {
  std::lock_guard<std::mutex> lock(diagnostics_->mu);
  return diagnostics_->count;
}

std::vector<std::string> EntityAnnotations::diagnostics() const {
  std::lock_guard<std::mutex> lock(diagnostics_->mu);
  return diagnostics_->messages;
}

EntityAnnotations EntityAnnotations::Load(const std::filesystem::path& path,
                                          bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open entity annotations " + path.string());
  EntityAnnotations result;
  result.strict_ = strict;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    nlohmann::json record =
        nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    std::string sent_id;
    std::vector<RawSpan> spans;
    try {
      if (record.is_discarded() || !record.is_object()) {
        throw FormatError("not a JSON object");
      }
      sent_id = record.at("sent_id").get<std::string>();
      for (const auto& s : record.at("spans")) {
        if (!s.at("start").is_number_integer() || !s.at("end").is_number_integer()) {
          throw FormatError("span offsets must be integers");
        }
        RawSpan raw;
        raw.start = s.at("start").get<long long>();
        raw.end = s.at("end").get<long long>();
        raw.label = s.value("label", std::string());
        spans.push_back(std::move(raw));
      }
    } catch (const std::exception& e) {
      if (strict) throw FormatError(where + "malformed record: " + e.what());
      result.Report(where + "malformed record: " + e.what());
      continue;
    }
    auto [it, inserted] = result.records_->try_emplace(sent_id);
    if (!inserted) {
      if (strict) throw FormatError(where + "duplicate sent_id '" + sent_id + "'");
      result.Report(where + "duplicate sent_id '" + sent_id + "'");
      continue;
    }
    it->second.spans = std::move(spans);
  }
  if (in.bad()) throw IoError("read error on " + path.string());
  return result;
}

bool EntityAnnotations::Contains(std::string_view sent_id) const {
  return records_->count(std::string(sent_id)) > 0;
}

std::vector<SalientSpan> EntityAnnotations::Resolve(const Sentence& sentence) const {
  auto it = records_->find(sentence.sent_id);
  if (it == records_->end()) return {};
  it->second.resolved.store(true, std::memory_order_relaxed);

  const long long length = static_cast<long long>(unicode::Length(sentence.text));
  std::vector<RawSpan> raw = it->second.spans;
  std::stable_sort(raw.begin(), raw.end(), [](const RawSpan& a, const RawSpan& b) {
    return a.start < b.start;
  });
  std::vector<SalientSpan> out;
  for (const RawSpan& r : raw) {
    const std::string where = "sentence " + sentence.sent_id + ": span [" +
                              std::to_string(r.start) + "," + std::to_string(r.end) + ")";
    if (r.start < 0 || r.end > length || r.start >= r.end) {
      Report(where + " out of bounds for length " + std::to_string(length));
      continue;
    }
    if (!out.empty() && static_cast<long long>(out.back().end) > r.start) {
      Report(where + " overlaps a previous span");
      continue;
    }
    SalientSpan span;
    span.sent_id = sentence.sent_id;
    span.kind = SalientKind::kEntity;
    span.start = static_cast<size_t>(r.start);
    span.end = static_cast<size_t>(r.end);
    span.surface = unicode::Slice(sentence.text, span.start, span.end);
    span.label = r.label;
    out.push_back(std::move(span));
  }
  return out;
}

std::vector<std::string> EntityAnnotations::Unresolved() const {
  std::vector<std::string> ids;
  for (const auto& [id, record] : *records_) {
    if (!record.resolved.load(std::memory_order_relaxed)) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::map<std::string, std::vector<SalientSpan>> LoadEntityAnnotations(
    const std::filesystem::path& path, std::span<const Sentence> sentences,
    bool strict, size_t* error_count) {
  const EntityAnnotations annotations = EntityAnnotations::Load(path, strict);
  std::map<std::string, std::vector<SalientSpan>> out;
  for (const Sentence& s : sentences) {
    if (annotations.Contains(s.sent_id)) out[s.sent_id] = annotations.Resolve(s);
  }
  size_t errors = annotations.error_count();
  const std::vector<std::string> unresolved = annotations.Unresolved();
  if (strict && !unresolved.empty()) {
    throw ValidationError("annotation sent_id '" + unresolved.front() +
                          "' does not match any sentence (" +
                          std::to_string(unresolved.size()) + " unresolved)");
  }
  errors += unresolved.size();
  if (error_count != nullptr) *error_count = errors;
  return out;
}

void WriteEntityAnnotations(
    std::ostream& out,
    const std::map<std::string, std::vector<SalientSpan>>& annotations) {
  for (const auto& [sent_id, spans] : annotations) {
    nlohmann::ordered_json record;
    record["sent_id"] = sent_id;
    record["spans"] = nlohmann::ordered_json::array();
    for (const SalientSpan& s : spans) {
      nlohmann::ordered_json span;
      span["start"] = s.start;
      span["end"] = s.end;
      span["label"] = s.label;
      record["spans"].push_back(std::move(span));
    }
    out << record.dump() << '\n';
  }
}

}  // namespace tempspan
