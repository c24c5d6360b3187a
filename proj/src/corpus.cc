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

#include "tempspan/corpus.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "json.hpp"
#include "tempspan/error.h"
#include "tempspan/unicode.h"

namespace tempspan {
namespace {

constexpr size_t kMaxDiagnostics = 100;

// Lowercase, without the final period.
constexpr std::array<std::string_view, 46> kAbbreviations = {
    "dr",   "mr",   "mrs",  "ms",   "st",   "jr",   "sr",    "prof",
    "gen",  "gov",  "sen",  "rep",  "rev",  "capt", "col",   "lt",
    "sgt",  "mt",   "ft",   "no",   "vol",  "fig",  "approx", "inc",
    "ltd",  "co",   "corp", "u.s",  "u.k",  "e.g",  "i.e",   "etc",
    "vs",   "cf",   "jan",  "feb",  "mar",  "apr",  "jun",   "jul",
    "aug",  "sep",  "sept", "oct",  "nov",  "dec",
};

bool IsAbbreviation(std::string_view lower_word) {
  return std::find(kAbbreviations.begin(), kAbbreviations.end(),
                   lower_word) != kAbbreviations.end();
}

bool IsTerminator(char32_t c) { return c == '.' || c == '!' || c == '?'; }

bool IsClosing(char32_t c) {
  switch (c) {
    case '"': case '\'': case ')': case ']': case '}':
    case U'’': case U'”': case U'»':
      return true;
    default:
      return false;
  }
}

bool IsOpeningQuote(char32_t c) {
  switch (c) {
    case '"': case '\'': case '(': case '[':
    case U'‘': case U'“': case U'«':
      return true;
    default:
      return false;
  }
}

bool IsDigit(char32_t c) { return c >= '0' && c <= '9'; }

// True when the '.' at `dot` closes an abbreviation or an initial.
bool IsNonFinalPeriod(const std::u32string& text, size_t dot) {
  size_t begin = dot;
  while (begin > 0 && !unicode::IsSpace(text[begin - 1])) --begin;
  while (begin < dot && !unicode::IsAlnum(text[begin])) ++begin;
  if (begin == dot) return false;
  if (dot - begin == 1 && unicode::IsUpper(text[begin])) return true;
  std::string word = unicode::Encode(
      std::u32string_view(text).substr(begin, dot - begin));
  return IsAbbreviation(unicode::AsciiLower(word));
}

void EmitSentence(const Document& doc, const std::u32string& text,
                  size_t begin, size_t end, std::vector<Sentence>* out) {
  while (begin < end && unicode::IsSpace(text[begin])) ++begin;
  while (end > begin && unicode::IsSpace(text[end - 1])) --end;
  if (begin == end) return;
  Sentence s;
  s.doc_id = doc.doc_id;
  s.ordinal = out->size();
  s.sent_id = MakeSentenceId(doc.doc_id, s.ordinal);
  s.start = begin;
  s.end = end;
  s.text = unicode::Encode(std::u32string_view(text).substr(begin, end - begin));
  s.over_length = end - begin > kMaxSentenceLength;
  out->push_back(std::move(s));
}

}  // namespace

std::string MakeSentenceId(std::string_view doc_id, size_t ordinal) {
  std::string id(doc_id);
  id += ':';
  id += std::to_string(ordinal);
  return id;
}

std::string NormalizeText(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\0') continue;
    if (c == '\r') {
      cleaned.push_back('\n');
      if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
      continue;
    }
    cleaned.push_back(c);
  }
  return unicode::NormalizeNfc(cleaned);
}

std::optional<InputFormat> ParseInputFormat(std::string_view name) {
  if (name == "jsonl") return InputFormat::kJsonl;
  if (name == "plain") return InputFormat::kPlain;
  return std::nullopt;
}

DocumentReader::DocumentReader(const std::filesystem::path& path,
                               InputFormat format, bool strict)
    : path_(path), in_(path, std::ios::binary), format_(format),
      strict_(strict) {
  if (!in_) throw IoError("cannot open " + path.string());
}

std::optional<Document> DocumentReader::Next() {
  return format_ == InputFormat::kJsonl ? NextJsonl() : NextPlain();
}

void DocumentReader::Skip(size_t line, const std::string& reason) {
  std::string message = path_.string() + ":" + std::to_string(line) + ": " +
                        reason;
  if (strict_) throw FormatError(message);
  ++skipped_;
  if (diagnostics_.size() < kMaxDiagnostics) {
    diagnostics_.push_back(std::move(message));
  }
}

bool DocumentReader::ClaimId(const std::string& id, size_t line) {
  if (seen_ids_.insert(id).second) return true;
  Skip(line, "duplicate document id '" + id + "'");
  return false;
}

std::optional<Document> DocumentReader::NextJsonl() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    nlohmann::json record =
        nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object()) {
      Skip(line_no_, "not a JSON object");
      continue;
    }
    auto id = record.find("id");
    auto text = record.find("text");
    auto title = record.find("title");
    if (id == record.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) {
      Skip(line_no_, "missing or empty string field 'id'");
      continue;
    }
    if (text == record.end() || !text->is_string()) {
      Skip(line_no_, "missing string field 'text'");
      continue;
    }
    if (title != record.end() && !title->is_string() && !title->is_null()) {
      Skip(line_no_, "field 'title' is not a string");
      continue;
    }
    Document doc;
    doc.doc_id = id->get<std::string>();
    if (!ClaimId(doc.doc_id, line_no_)) continue;
    if (title != record.end() && title->is_string()) {
      doc.title = NormalizeText(title->get_ref<const std::string&>());
    }
    doc.text = NormalizeText(text->get_ref<const std::string&>());
    return doc;
  }
  if (in_.bad()) throw IoError("read error on " + path_.string());
  return std::nullopt;
}

std::optional<Document> DocumentReader::NextPlain() {
  std::string line;
  std::string body;
  bool in_doc = false;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool blank = std::all_of(line.begin(), line.end(), [](unsigned char c) {
      return std::isspace(c);
    });
    if (blank) {
      if (in_doc) break;
      continue;
    }
    if (in_doc) body += '\n';
    body += line;
    in_doc = true;
  }
  if (in_.bad()) throw IoError("read error on " + path_.string());
  if (!in_doc) return std::nullopt;
  Document doc;
  doc.doc_id = path_.filename().string() + ":" + std::to_string(plain_ordinal_++);
  doc.text = NormalizeText(body);
  return doc;
}

std::vector<Sentence> SegmentSentences(const Document& doc) {
  std::vector<Sentence> out;
  const std::u32string text = unicode::Decode(doc.text);
  const size_t n = text.size();
  size_t begin = 0;
  size_t i = 0;
  while (i < n) {
    const char32_t c = text[i];
    if (c == '\n') {
      size_t j = i;
      int newlines = 0;
      while (j < n && unicode::IsSpace(text[j])) {
        if (text[j] == '\n') ++newlines;
        ++j;
      }
      if (newlines >= 2) {
        EmitSentence(doc, text, begin, i, &out);
        begin = j;
      }
      i = j;
      continue;
    }
    if (!IsTerminator(c)) {
      ++i;
      continue;
    }
    size_t run_end = i + 1;
    while (run_end < n && IsTerminator(text[run_end])) ++run_end;
    size_t j = run_end;
    while (j < n && IsClosing(text[j])) ++j;
    if (j < n && !unicode::IsSpace(text[j])) {
      i = j;
      continue;
    }
    size_t k = j;
    while (k < n && unicode::IsSpace(text[k])) ++k;
    const bool starts_new =
        k == n || unicode::IsUpper(text[k]) || IsDigit(text[k]) ||
        IsOpeningQuote(text[k]);
    const bool single_period = c == '.' && run_end == i + 1;
    if (starts_new && !(single_period && IsNonFinalPeriod(text, i))) {
      EmitSentence(doc, text, begin, j, &out);
      begin = k;
      i = k;
      continue;
    }
    i = j;
  }
  EmitSentence(doc, text, begin, n, &out);
  return out;
}

}  // namespace tempspan
