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

#include "tempspan/temporal.h"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <regex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "tempspan/error.h"
#include "tempspan/tokenizer.h"
#include "tempspan/unicode.h"

namespace tempspan {

// Token classes usable as @name in patterns.
enum TokenClass : uint32_t {
  kMonth = 1u << 0,
  kMonthAbbr = 1u << 1,
  kWeekday = 1u << 2,
  kWeekdayPlural = 1u << 3,
  kDay = 1u << 4,
  kYear = 1u << 5,
  kCardinal = 1u << 6,
  kNumberWord = 1u << 7,
  kUnit = 1u << 8,
  kUnitSingular = 1u << 9,
  kDaypart = 1u << 10,
  kFrequency = 1u << 11,
  kAmPm = 1u << 12,
  kClock = 1u << 13,
  kClockAmPm = 1u << 14,
  kIsoDate = 1u << 15,
  kUnitCompound = 1u << 16,
  kDecade = 1u << 17,
  kEra = 1u << 18,
};

namespace {

constexpr std::pair<std::string_view, uint32_t> kClassNames[] = {
    {"month", kMonth},
    {"month_abbr", kMonthAbbr},
    {"weekday", kWeekday},
    {"weekday_plural", kWeekdayPlural},
    {"day", kDay},
    {"year", kYear},
    {"cardinal", kCardinal},
    {"number_word", kNumberWord},
    {"unit", kUnit},
    {"unit_singular", kUnitSingular},
    {"daypart", kDaypart},
    {"frequency", kFrequency},
    {"ampm", kAmPm},
    {"clock", kClock},
    {"clock_ampm", kClockAmPm},
    {"iso_date", kIsoDate},
    {"unit_compound", kUnitCompound},
    {"decade", kDecade},
    {"era", kEra},
};

class Lexicon {
 public:
  static const Lexicon& Get() {
    static const Lexicon lexicon;
    return lexicon;
  }

  bool month(std::string_view w) const { return months_.count(w) > 0; }
  bool month_abbr(std::string_view w) const { return month_abbrs_.count(w) > 0; }
  bool weekday(std::string_view w) const { return weekdays_.count(w) > 0; }
  bool weekday_plural(std::string_view w) const {
    return weekday_plurals_.count(w) > 0;
  }
  bool number_word(std::string_view w) const { return number_words_.count(w) > 0; }
  bool unit(std::string_view w) const {
    return units_.count(w) > 0 || unit_plurals_.count(w) > 0;
  }
  bool unit_singular(std::string_view w) const { return units_.count(w) > 0; }
  bool daypart(std::string_view w) const { return dayparts_.count(w) > 0; }
  bool frequency(std::string_view w) const { return frequencies_.count(w) > 0; }
  bool ampm(std::string_view w) const { return ampm_.count(w) > 0; }
  bool era(std::string_view w) const { return eras_.count(w) > 0; }

 private:
  using Set = std::unordered_set<std::string_view>;

  Lexicon() {
    static const char* const kOnes[] = {
        "zero",    "one",     "two",       "three",    "four",
        "five",    "six",     "seven",     "eight",    "nine",
        "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
        "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
    static const char* const kTens[] = {"twenty", "thirty",  "forty",
                                        "fifty",  "sixty",   "seventy",
                                        "eighty", "ninety"};
    for (const char* w : kOnes) number_words_.insert(w);
    for (const char* t : kTens) {
      number_words_.insert(t);
      for (int i = 1; i <= 9; ++i) {
        compounds_.push_back(std::string(t) + "-" + kOnes[i]);
      }
    }
    for (const std::string& c : compounds_) number_words_.insert(c);
  }

  Set months_ = {"january", "february", "march",     "april",
                 "may",     "june",     "july",      "august",
                 "september", "october", "november", "december"};
  Set month_abbrs_ = {"jan",  "jan.", "feb",  "feb.", "mar",   "mar.",
                      "apr",  "apr.", "jun",  "jun.", "jul",   "jul.",
                      "aug",  "aug.", "sep",  "sep.", "sept",  "sept.",
                      "oct",  "oct.", "nov",  "nov.", "dec",   "dec."};
  Set weekdays_ = {"monday", "tuesday",  "wednesday", "thursday",
                   "friday", "saturday", "sunday"};
  Set weekday_plurals_ = {"mondays", "tuesdays",  "wednesdays", "thursdays",
                          "fridays", "saturdays", "sundays"};
  Set units_ = {"second", "minute",  "hour",    "day",       "week",
                "fortnight", "month", "year",   "decade",    "century",
                "millennium"};
  Set unit_plurals_ = {"seconds", "minutes", "hours",     "days",
                       "weeks",   "fortnights", "months", "years",
                       "decades", "centuries", "millennia", "millenniums"};
  Set dayparts_ = {"morning", "afternoon", "evening", "night",
                   "noon",    "midnight",  "tonight"};
  Set frequencies_ = {"hourly",   "daily",      "nightly",     "weekly",
                      "biweekly", "fortnightly", "monthly",    "quarterly",
                      "yearly",   "annually",   "biannually",  "semiannually"};
  Set ampm_ = {"am", "pm", "a.m.", "p.m.", "a.m", "p.m"};
  Set eras_ = {"bc", "ad", "bce", "ce", "b.c.", "a.d.", "b.c.e.", "c.e."};
  std::vector<std::string> compounds_;
  Set number_words_;
};

bool AllDigits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

// Parses a short all-digit string; -1 when not digits or too long.
long long DigitValue(std::string_view s) {
  if (!AllDigits(s) || s.size() > 12) return -1;
  long long v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

size_t LeadingDigits(std::string_view s) {
  size_t i = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
  return i;
}

bool IsDay(std::string_view w) {
  const size_t d = LeadingDigits(w);
  if (d == 0 || d > 2) return false;
  std::string_view suffix = w.substr(d);
  if (!suffix.empty() && suffix != "st" && suffix != "nd" && suffix != "rd" &&
      suffix != "th") {
    return false;
  }
  const long long v = DigitValue(w.substr(0, d));
  return v >= 1 && v <= 31;
}

bool IsYear(std::string_view w) {
  const long long v = w.size() == 4 ? DigitValue(w) : -1;
  return v >= 1000 && v <= 2999;
}

// 12, 1,000, 2.5
bool IsNumeral(std::string_view w) {
  size_t i = 0;
  bool digit_expected = true;
  for (; i < w.size(); ++i) {
    const char c = w[i];
    if (c >= '0' && c <= '9') {
      digit_expected = false;
    } else if ((c == ',' || c == '.') && !digit_expected) {
      digit_expected = true;
    } else {
      return false;
    }
  }
  return !w.empty() && !digit_expected;
}

// H:MM or H:MM:SS
bool ParseClock(std::string_view w, long long* hour) {
  const size_t h = LeadingDigits(w);
  if (h == 0 || h > 2 || h >= w.size() || w[h] != ':') return false;
  std::string_view rest = w.substr(h + 1);
  for (int part = 0; part < 2 && !rest.empty(); ++part) {
    if (rest.size() < 2 || DigitValue(rest.substr(0, 2)) < 0 ||
        DigitValue(rest.substr(0, 2)) > 59) {
      return false;
    }
    rest = rest.substr(2);
    if (rest.empty()) break;
    if (rest[0] != ':' || part == 1) return false;
    rest = rest.substr(1);
    if (rest.empty()) return false;
  }
  if (!rest.empty()) return false;
  *hour = DigitValue(w.substr(0, h));
  return *hour <= 24;
}

bool IsClock(std::string_view w) {
  long long hour = 0;
  return ParseClock(w, &hour);
}

// 3pm, 11:30am, 7p.m.
bool IsClockAmPm(std::string_view w) {
  static constexpr std::string_view kSuffixes[] = {"a.m.", "p.m.", "am", "pm"};
  for (std::string_view suffix : kSuffixes) {
    if (w.size() <= suffix.size() || !w.ends_with(suffix)) continue;
    std::string_view head = w.substr(0, w.size() - suffix.size());
    long long hour = DigitValue(head);
    if (hour < 0 && !ParseClock(head, &hour)) return false;
    return hour >= 1 && hour <= 12;
  }
  return false;
}

bool IsIsoDate(std::string_view w) {
  if (w.size() < 8 || w.size() > 10 || !IsYear(w.substr(0, 4))) return false;
  const char sep = w[4];
  if (sep != '-' && sep != '/') return false;
  std::string_view rest = w.substr(5);
  const size_t m = LeadingDigits(rest);
  if (m == 0 || m > 2 || m >= rest.size() || rest[m] != sep) return false;
  std::string_view day = rest.substr(m + 1);
  const long long month = DigitValue(rest.substr(0, m));
  const long long d = day.size() <= 2 ? DigitValue(day) : -1;
  return month >= 1 && month <= 12 && d >= 1 && d <= 31;
}

// 3-day, five-year, 24-hour
bool IsUnitCompound(std::string_view w, const Lexicon& lex) {
  const size_t dash = w.rfind('-');
  if (dash == std::string_view::npos || dash == 0) return false;
  std::string_view head = w.substr(0, dash);
  return lex.unit_singular(w.substr(dash + 1)) &&
         (IsNumeral(head) || lex.number_word(head));
}

// 1990s, 1990's
bool IsDecade(std::string_view w) {
  std::string_view digits;
  if (w.size() == 5 && w.ends_with("s")) {
    digits = w.substr(0, 4);
  } else if (w.size() == 6 && w.ends_with("'s")) {
    digits = w.substr(0, 4);
  } else {
    return false;
  }
  return IsYear(digits) && digits[3] == '0';
}

struct TokenFeatures {
  uint32_t classes = 0;
  long long value = -1;  // integer value of an all-digit token
};

TokenFeatures Featurize(const Token& token) {
  const Lexicon& lex = Lexicon::Get();
  const std::string_view w = token.lower;
  TokenFeatures f;
  f.value = DigitValue(w);
  auto set = [&f](uint32_t cls, bool on) {
    if (on) f.classes |= cls;
  };
  // Lowercase "may" is nearly always the modal verb.
  set(kMonth, lex.month(w) && (w != "may" || token.capitalized));
  set(kMonthAbbr, lex.month_abbr(w));
  set(kWeekday, lex.weekday(w));
  set(kWeekdayPlural, lex.weekday_plural(w));
  set(kDay, IsDay(w));
  set(kYear, IsYear(w));
  set(kNumberWord, lex.number_word(w));
  set(kCardinal, IsNumeral(w) || lex.number_word(w));
  set(kUnitSingular, lex.unit_singular(w));
  set(kUnit, lex.unit(w));
  set(kDaypart, lex.daypart(w));
  set(kFrequency, lex.frequency(w));
  set(kAmPm, lex.ampm(w));
  set(kClock, IsClock(w));
  set(kClockAmPm, IsClockAmPm(w));
  set(kIsoDate, IsIsoDate(w));
  set(kUnitCompound, IsUnitCompound(w, lex));
  set(kDecade, IsDecade(w));
  set(kEra, lex.era(w));
  return f;
}

struct Atom {
  enum class Kind { kLiteral, kClass, kRange, kRegex };
  Kind kind = Kind::kLiteral;
  std::string literal;
  uint32_t cls = 0;
  long long lo = 0;
  long long hi = 0;
  std::shared_ptr<const std::regex> re;

  bool Matches(const Token& token, const TokenFeatures& f) const {
    switch (kind) {
      case Kind::kLiteral:
        return token.lower == literal;
      case Kind::kClass:
        return (f.classes & cls) != 0;
      case Kind::kRange:
        return f.value >= lo && f.value <= hi;
      case Kind::kRegex:
        return std::regex_match(token.text, *re);
    }
    return false;
  }
};

struct Element {
  std::vector<Atom> alternatives;
  bool optional = false;

  bool Matches(const Token& token, const TokenFeatures& f) const {
    for (const Atom& a : alternatives) {
      if (a.Matches(token, f)) return true;
    }
    return false;
  }
};

struct CompiledRule {
  std::vector<Element> elements;
};

}  // namespace

struct RuleSet::Compiled {
  std::vector<RuleSpec> specs;
  std::vector<CompiledRule> rules;
  std::unordered_map<std::string, size_t> by_id;
};

namespace {

[[noreturn]] void BadPattern(const RuleSpec& spec, const std::string& why) {
  throw ValidationError("rule '" + spec.rule_id + "': " + why + " in pattern '" +
                        spec.pattern + "'");
}

Atom CompileAtom(const RuleSpec& spec, std::string_view text) {
  Atom atom;
  if (text.empty()) BadPattern(spec, "empty alternative");
  if (text.size() >= 2 && text.front() == '/' && text.back() == '/') {
    atom.kind = Atom::Kind::kRegex;
    try {
      atom.re = std::make_shared<const std::regex>(
          std::string(text.substr(1, text.size() - 2)),
          std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
    } catch (const std::regex_error& e) {
      BadPattern(spec, std::string("bad regex ") + std::string(text) + " (" +
                           e.what() + ")");
    }
    return atom;
  }
  if (text.front() == '@' && text.size() > 1) {
    const std::string_view name = text.substr(1);
    for (const auto& [class_name, cls] : kClassNames) {
      if (class_name == name) {
        atom.kind = Atom::Kind::kClass;
        atom.cls = cls;
        return atom;
      }
    }
    BadPattern(spec, "unknown class @" + std::string(name));
  }
  if (text.front() == '#' && text.size() > 1) {
    const std::string_view range = text.substr(1);
    const size_t dash = range.find('-');
    if (dash == std::string_view::npos) BadPattern(spec, "bad range");
    atom.kind = Atom::Kind::kRange;
    atom.lo = DigitValue(range.substr(0, dash));
    atom.hi = DigitValue(range.substr(dash + 1));
    if (atom.lo < 0 || atom.hi < atom.lo) BadPattern(spec, "bad range");
    return atom;
  }
  atom.kind = Atom::Kind::kLiteral;
  atom.literal = text == "\\?" ? std::string("?") : unicode::AsciiLower(text);
  return atom;
}

Element CompileElement(const RuleSpec& spec, std::string_view text) {
  Element element;
  if (text.size() > 1 && text.back() == '?' && text != "\\?") {
    element.optional = true;
    text.remove_suffix(1);
  }
  const bool regex = text.size() >= 2 && text.front() == '/' && text.back() == '/';
  if (regex) {
    element.alternatives.push_back(CompileAtom(spec, text));
    return element;
  }
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') {
    text = text.substr(1, text.size() - 2);
  }
  size_t begin = 0;
  while (true) {
    const size_t bar = text.find('|', begin);
    element.alternatives.push_back(CompileAtom(
        spec, text.substr(begin, bar == std::string_view::npos ? std::string_view::npos
                                                               : bar - begin)));
    if (bar == std::string_view::npos) break;
    begin = bar + 1;
  }
  return element;
}

CompiledRule CompileRule(const RuleSpec& spec) {
  CompiledRule rule;
  std::istringstream in(spec.pattern);
  std::string piece;
  while (in >> piece) rule.elements.push_back(CompileElement(spec, piece));
  if (rule.elements.empty()) BadPattern(spec, "empty pattern");
  if (std::all_of(rule.elements.begin(), rule.elements.end(),
                  [](const Element& e) { return e.optional; })) {
    BadPattern(spec, "every element is optional");
  }
  return rule;
}

constexpr size_t kNoMatch = static_cast<size_t>(-1);

// Furthest token index reachable by matching elements[elem..] at `pos`.
size_t MatchFrom(const CompiledRule& rule, size_t elem,
                 const std::vector<Token>& tokens,
                 const std::vector<TokenFeatures>& features, size_t pos) {
  if (elem == rule.elements.size()) return pos;
  const Element& e = rule.elements[elem];
  size_t best = kNoMatch;
  if (pos < tokens.size() && e.Matches(tokens[pos], features[pos])) {
    best = MatchFrom(rule, elem + 1, tokens, features, pos + 1);
  }
  if (e.optional) {
    const size_t skipped = MatchFrom(rule, elem + 1, tokens, features, pos);
    if (skipped != kNoMatch && (best == kNoMatch || skipped > best)) best = skipped;
  }
  return best;
}

}  // namespace

std::string_view ToString(TemporalType type) {
  switch (type) {
    case TemporalType::kDate:
      return "date";
    case TemporalType::kDuration:
      return "duration";
    case TemporalType::kSet:
      return "set";
    case TemporalType::kTime:
      return "time";
  }
  return "date";
}

std::optional<TemporalType> ParseTemporalType(std::string_view name) {
  const std::string lower = unicode::AsciiLower(name);
  for (TemporalType t : kTemporalTypes) {
    if (ToString(t) == lower) return t;
  }
  return std::nullopt;
}

RuleSet RuleSet::Compile(std::vector<RuleSpec> specs) {
  auto compiled = std::make_shared<Compiled>();
  for (size_t i = 0; i < specs.size(); ++i) {
    const RuleSpec& spec = specs[i];
    if (spec.rule_id.empty()) {
      throw ValidationError("rule #" + std::to_string(i) + " has an empty rule_id");
    }
    if (!compiled->by_id.emplace(spec.rule_id, i).second) {
      throw ValidationError("duplicate rule_id '" + spec.rule_id + "'");
    }
    compiled->rules.push_back(CompileRule(spec));
  }
  compiled->specs = std::move(specs);
  return RuleSet(std::move(compiled));
}

RuleSet RuleSet::FromJson(std::string_view json_text) {
  nlohmann::json doc =
      nlohmann::json::parse(json_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("rules") ||
      !doc["rules"].is_array()) {
    throw FormatError("rule file must be a JSON object with a 'rules' array");
  }
  std::vector<RuleSpec> specs;
  for (const auto& r : doc["rules"]) {
    RuleSpec spec;
    try {
      spec.rule_id = r.at("rule_id").get<std::string>();
      spec.pattern = r.at("pattern").get<std::string>();
      const auto type = ParseTemporalType(r.at("type").get<std::string>());
      if (!type) {
        throw FormatError("rule '" + spec.rule_id + "': unknown type '" +
                          r.at("type").get<std::string>() + "'");
      }
      spec.type = *type;
      spec.priority = r.value("priority", 0);
      spec.salient_date = r.value("salient_date", false);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("malformed rule entry: ") + e.what());
    }
    specs.push_back(std::move(spec));
  }
  return Compile(std::move(specs));
}

RuleSet RuleSet::LoadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open rule file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return FromJson(buffer.str());
  } catch (const Error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

const RuleSet& RuleSet::Default() {
  static const RuleSet rules = Compile(DefaultSpecs());
  return rules;
}

const std::vector<RuleSpec>& RuleSet::specs() const { return compiled_->specs; }

std::string RuleSet::ToJson() const {
  nlohmann::ordered_json rules = nlohmann::ordered_json::array();
  for (const RuleSpec& spec : specs()) {
    nlohmann::ordered_json r;
    r["rule_id"] = spec.rule_id;
    r["type"] = ToString(spec.type);
    r["priority"] = spec.priority;
    r["pattern"] = spec.pattern;
    if (spec.salient_date) r["salient_date"] = true;
    rules.push_back(std::move(r));
  }
  nlohmann::ordered_json doc;
  doc["rules"] = std::move(rules);
  return doc.dump(2) + "\n";
}

std::vector<TemporalSpan> ResolveOverlaps(std::vector<SpanCandidate> candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const SpanCandidate& a, const SpanCandidate& b) {
              const size_t la = a.span.end - a.span.start;
              const size_t lb = b.span.end - b.span.start;
              if (la != lb) return la > lb;
              if (a.priority != b.priority) return a.priority > b.priority;
              if (a.span.start != b.span.start) return a.span.start < b.span.start;
              return a.rule_index < b.rule_index;
            });
  std::vector<TemporalSpan> kept;
  for (SpanCandidate& c : candidates) {
    const bool overlaps = std::any_of(kept.begin(), kept.end(), [&c](const TemporalSpan& k) {
      return c.span.start < k.end && k.start < c.span.end;
    });
    if (!overlaps) kept.push_back(std::move(c.span));
  }
  std::sort(kept.begin(), kept.end(), [](const TemporalSpan& a, const TemporalSpan& b) {
    return a.start < b.start;
  });
  return kept;
}

std::vector<SpanCandidate> MatchCandidates(std::string_view text,
                                           const RuleSet& rules) {
  const std::vector<Token> tokens = Tokenize(text);
  std::vector<TokenFeatures> features;
  features.reserve(tokens.size());
  for (const Token& t : tokens) features.push_back(Featurize(t));

  const RuleSet::Compiled& compiled = rules.compiled();
  std::vector<SpanCandidate> out;
  for (size_t pos = 0; pos < tokens.size(); ++pos) {
    for (size_t r = 0; r < compiled.rules.size(); ++r) {
      const size_t end = MatchFrom(compiled.rules[r], 0, tokens, features, pos);
      if (end == kNoMatch || end == pos) continue;
      const RuleSpec& spec = compiled.specs[r];
      SpanCandidate c;
      c.span.type = spec.type;
      c.span.start = tokens[pos].start;
      c.span.end = tokens[end - 1].end;
      c.span.surface = unicode::Slice(text, c.span.start, c.span.end);
      c.span.rule_id = spec.rule_id;
      c.priority = spec.priority;
      c.rule_index = r;
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<TemporalSpan> ParseTemporal(std::string_view text,
                                        const RuleSet& rules) {
  return ResolveOverlaps(MatchCandidates(text, rules));
}

std::vector<TemporalSpan> ParseTemporal(const Sentence& sentence,
                                        const RuleSet& rules) {
  std::vector<TemporalSpan> spans = ParseTemporal(sentence.text, rules);
  for (TemporalSpan& s : spans) s.sent_id = sentence.sent_id;
  return spans;
}

bool IsSalientDateRule(const RuleSet& rules, std::string_view rule_id) {
  const auto& by_id = rules.compiled().by_id;
  auto it = by_id.find(std::string(rule_id));
  return it != by_id.end() && rules.specs()[it->second].salient_date;
}

}  // namespace tempspan
