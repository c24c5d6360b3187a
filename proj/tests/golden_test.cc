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


#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "tempspan/masking.h"
#include "tempspan/span_sources.h"
#include "tempspan/temporal.h"
#include "test_util.h"

namespace tempspan {
namespace {

using ::tempspan::testing::DataPath;
using ::tempspan::testing::GoldenSentence;
using ::tempspan::testing::LoadGolden;

std::string Describe(const std::vector<TemporalSpan>& spans) {
  std::ostringstream out;
  for (const TemporalSpan& s : spans) {
    out << "[" << ToString(s.type) << ":" << s.surface << " " << s.start << "," << s.end
        << " " << s.rule_id << "] ";
  }
  return out.str();
}

class GoldenTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    golden_ = new std::vector<GoldenSentence>(LoadGolden(DataPath("golden_temporal.txt")));
  }
  static void TearDownTestSuite() {
    delete golden_;
    golden_ = nullptr;
  }
  static std::vector<GoldenSentence>* golden_;
};

std::vector<GoldenSentence>* GoldenTest::golden_ = nullptr;

TEST_F(GoldenTest, HasAtLeastTwoHundredSentences) {
  EXPECT_GE(golden_->size(), 200u);
}

TEST_F(GoldenTest, CoversEveryType) {
  size_t counts[4] = {};
  for (const GoldenSentence& g : *golden_) {
    for (const auto& s : g.spans) ++counts[static_cast<size_t>(s.type)];
  }
  for (size_t c : counts) EXPECT_GE(c, 20u);
}

TEST_F(GoldenTest, DefaultRulesMatchExactly) {
  for (const GoldenSentence& g : *golden_) {
    const std::vector<TemporalSpan> got = ParseTemporal(g.text, RuleSet::Default());
    bool same = got.size() == g.spans.size();
    for (size_t i = 0; same && i < got.size(); ++i) {
      same = got[i].type == g.spans[i].type && got[i].start == g.spans[i].start &&
             got[i].end == g.spans[i].end && got[i].surface == g.spans[i].surface;
    }
    EXPECT_TRUE(same) << "line " << g.line << ": " << g.text << "\n  got: " << Describe(got);
  }
}

TEST_F(GoldenTest, EveryRuleFiresSomewhere) {
  std::set<std::string> fired;
  for (const GoldenSentence& g : *golden_) {
    for (const TemporalSpan& s : ParseTemporal(g.text, RuleSet::Default())) {
      fired.insert(s.rule_id);
    }
  }
  for (const RuleSpec& spec : RuleSet::DefaultSpecs()) {
    EXPECT_TRUE(fired.count(spec.rule_id)) << spec.rule_id << " never fires on the golden file";
  }
}

TEST_F(GoldenTest, DetectedDatesAreParsedDates) {
  for (const GoldenSentence& g : *golden_) {
    const std::vector<TemporalSpan> parsed = ParseTemporal(g.text, RuleSet::Default());
    for (const SalientSpan& d : DetectDates(g.text)) {
      bool found = false;
      for (const TemporalSpan& t : parsed) {
        found |= t.type == TemporalType::kDate && t.start == d.start && t.end == d.end;
      }
      EXPECT_TRUE(found) << "line " << g.line << ": " << d.surface;
      EXPECT_EQ(d.kind, SalientKind::kRegexDate);
    }
  }
}

TEST_F(GoldenTest, ShippedRuleFileMatchesBuiltIn) {
  const RuleSet shipped =
      RuleSet::LoadFile(std::filesystem::path(TEMPSPAN_RULES_DIR) / "default.json");
  EXPECT_EQ(shipped.specs(), RuleSet::DefaultSpecs());
  for (const GoldenSentence& g : *golden_) {
    EXPECT_EQ(ParseTemporal(g.text, shipped), ParseTemporal(g.text, RuleSet::Default()));
  }
}

}  // namespace
}  // namespace tempspan
