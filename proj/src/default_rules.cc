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

// The compiled-in grammar. rules/default.json is a copy of this table and a
// test keeps the two in sync; changing a rule here means regenerating that
// file (`tempspan rules --dump`) and reviewing tests/data/golden_temporal.txt.

#include "tempspan/temporal.h"

namespace tempspan {
namespace {

constexpr int kDurationPriority = 10;
constexpr int kDatePriority = 20;
constexpr int kTimePriority = 30;
constexpr int kSetPriority = 40;

RuleSpec Date(const char* id, const char* pattern, bool salient) {
  return {id, TemporalType::kDate, kDatePriority, pattern, salient};
}
RuleSpec Time(const char* id, const char* pattern) {
  return {id, TemporalType::kTime, kTimePriority, pattern, false};
}
RuleSpec Duration(const char* id, const char* pattern) {
  return {id, TemporalType::kDuration, kDurationPriority, pattern, false};
}
RuleSpec Set(const char* id, const char* pattern) {
  return {id, TemporalType::kSet, kSetPriority, pattern, false};
}

}  // namespace

const std::vector<RuleSpec>& RuleSet::DefaultSpecs() {
  static const std::vector<RuleSpec> specs = {
      // Calendar dates. These also make up the regex date family.
      Date("date.month_day_year", "@month @day , @year", true),
      Date("date.month_day_year_nocomma", "@month @day @year", true),
      Date("date.month_day", "@month @day", true),
      Date("date.day_month_year", "@day @month @year", true),
      Date("date.day_month", "@day @month", true),
      Date("date.day_of_month", "@day of @month @year?", true),
      Date("date.day_abbr", "@day @month_abbr @year?", true),
      Date("date.abbr_day_year", "@month_abbr @day , @year", true),
      Date("date.abbr_day", "@month_abbr @day", true),
      Date("date.abbr_year", "@month_abbr @year", true),
      Date("date.month_year", "@month @year", true),
      Date("date.iso", "@iso_date", true),
      Date("date.year", "@year", true),
      // Other dates.
      Date("date.year_era", "#1-9999 @era", false),
      Date("date.decade", "@decade", false),
      Date("date.weekday", "@weekday", false),
      Date("date.relative_day", "today|yesterday|tomorrow", false),

      Time("time.clock", "@clock @ampm?"),
      Time("time.clock_ampm", "@clock_ampm"),
      Time("time.hour_ampm", "#1-12 @ampm"),
      Time("time.oclock", "@cardinal o'clock"),
      Time("time.daypart", "@daypart"),
      Time("time.day_daypart", "(this|yesterday|tomorrow|last|@weekday) @daypart"),
      Time("time.deictic",
           "(next|last|this) (@weekday|week|weekend|month|year|decade|century|"
           "spring|summer|autumn|fall|winter)"),

      Duration("duration.cardinal_unit", "@cardinal @unit"),
      Duration("duration.several_unit", "several @unit"),
      Duration("duration.few_unit", "a few @unit"),
      Duration("duration.article_unit",
               "a|an (minute|hour|day|week|fortnight|month|year|decade|century|"
               "millennium)"),
      Duration("duration.half", "half a|an @unit_singular"),
      Duration("duration.compound", "@unit_compound"),

      Set("set.every_unit", "every|each @cardinal? @unit"),
      Set("set.every_other", "every|each other @unit_singular"),
      Set("set.every_day_name",
          "every|each (@weekday|@daypart|spring|summer|autumn|fall|winter)"),
      Set("set.weekday_plural", "@weekday_plural"),
      Set("set.frequency", "@frequency"),
      Set("set.times_per", "once|twice|thrice a|an|per|each|every @unit_singular"),
      Set("set.n_times_per", "@cardinal times a|an|per|each @unit_singular"),
  };
  return specs;
}

}  // namespace tempspan
