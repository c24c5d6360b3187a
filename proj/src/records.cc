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

#include "tempspan/records.h"

#include <string>
#include <type_traits>

#include "json.hpp"
#include "tempspan/error.h"

namespace tempspan {
namespace {

using Json = nlohmann::ordered_json;

Json ParseObject(std::string_view line) {
  Json j = Json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) throw FormatError("not a JSON object");
  return j;
}

template <typename T>
T Field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw FormatError(std::string("missing field '") + name + "'");
  if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
    if (!it->is_number_integer() || (std::is_unsigned_v<T> && !it->is_number_unsigned())) {
      throw FormatError(std::string("field '") + name + "' must be a non-negative integer");
    }
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw FormatError(std::string("field '") + name + "' has the wrong type");
  }
}

}  // namespace

std::string ToJsonLine(const Sentence& s) {
  Json j;
  j["sent_id"] = s.sent_id;
  j["doc_id"] = s.doc_id;
  j["ordinal"] = s.ordinal;
  j["text"] = s.text;
  j["start"] = s.start;
  j["end"] = s.end;
  j["over_length"] = s.over_length;
  return j.dump();
}

std::string ToJsonLine(const TemporalSpan& s) {
  Json j;
  j["sent_id"] = s.sent_id;
  j["type"] = ToString(s.type);
  j["start"] = s.start;
  j["end"] = s.end;
  j["surface"] = s.surface;
  j["rule_id"] = s.rule_id;
  return j.dump();
}

std::string ToJsonLine(const SalientSpan& s) {
  Json j;
  j["sent_id"] = s.sent_id;
  j["kind"] = ToString(s.kind);
  j["start"] = s.start;
  j["end"] = s.end;
  j["surface"] = s.surface;
  j["label"] = s.label;
  return j.dump();
}

std::string ToJsonLine(const MaskedExample& e) {
  Json j;
  j["example_id"] = e.example_id;
  j["sent_id"] = e.sent_id;
  j["strategy"] = ToString(e.strategy);
  j["span_type"] = e.span_type;
  j["inputs"] = e.inputs;
  j["targets"] = e.targets;
  j["span_start"] = e.span_start;
  j["span_end"] = e.span_end;
  return j.dump();
}

Sentence SentenceFromJson(std::string_view line) {
  const Json j = ParseObject(line);
  Sentence s;
  s.sent_id = Field<std::string>(j, "sent_id");
  s.doc_id = Field<std::string>(j, "doc_id");
  s.ordinal = Field<size_t>(j, "ordinal");
  s.text = Field<std::string>(j, "text");
  s.start = Field<size_t>(j, "start");
  s.end = Field<size_t>(j, "end");
  s.over_length = j.value("over_length", false);
  return s;
}

TemporalSpan TemporalSpanFromJson(std::string_view line) {
  const Json j = ParseObject(line);
  TemporalSpan s;
  s.sent_id = Field<std::string>(j, "sent_id");
  const std::string type = Field<std::string>(j, "type");
  const auto parsed = ParseTemporalType(type);
  if (!parsed) throw FormatError("unknown temporal type '" + type + "'");
  s.type = *parsed;
  s.start = Field<size_t>(j, "start");
  s.end = Field<size_t>(j, "end");
  s.surface = Field<std::string>(j, "surface");
  s.rule_id = j.value("rule_id", std::string());
  return s;
}

SalientSpan SalientSpanFromJson(std::string_view line) {
  const Json j = ParseObject(line);
  SalientSpan s;
  s.sent_id = Field<std::string>(j, "sent_id");
  const std::string kind = Field<std::string>(j, "kind");
  const auto parsed = ParseSalientKind(kind);
  if (!parsed) throw FormatError("unknown salient kind '" + kind + "'");
  s.kind = *parsed;
  s.start = Field<size_t>(j, "start");
  s.end = Field<size_t>(j, "end");
  s.surface = Field<std::string>(j, "surface");
  s.label = j.value("label", std::string());
  return s;
}

MaskedExample MaskedExampleFromJson(std::string_view line) {
  const Json j = ParseObject(line);
  MaskedExample e;
  e.example_id = Field<std::string>(j, "example_id");
  e.sent_id = Field<std::string>(j, "sent_id");
  const std::string strategy = Field<std::string>(j, "strategy");
  const auto parsed = ParseStrategy(strategy);
  if (!parsed) throw FormatError("unknown strategy '" + strategy + "'");
  e.strategy = *parsed;
  e.span_type = Field<std::string>(j, "span_type");
  e.inputs = Field<std::string>(j, "inputs");
  e.targets = Field<std::string>(j, "targets");
  e.span_start = Field<size_t>(j, "span_start");
  e.span_end = Field<size_t>(j, "span_end");
  return e;
}

JsonlReader::JsonlReader(const std::filesystem::path& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw IoError("cannot open " + path.string());
}

bool JsonlReader::Next(std::string* line) {
  while (std::getline(in_, *line)) {
    ++line_no_;
    if (!line->empty() && line->back() == '\r') line->pop_back();
    if (line->find_first_not_of(" \t") != std::string::npos) return true;
  }
  if (in_.bad()) throw IoError("read error on " + path_.string());
  return false;
}

std::string JsonlReader::Where() const {
  return path_.string() + ":" + std::to_string(line_no_) + ": ";
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace tempspan
