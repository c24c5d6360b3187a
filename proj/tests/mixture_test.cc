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


#include "tempspan/mixture.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "tempspan/error.h"
#include "tempspan/masking.h"
#include "tempspan/records.h"
#include "test_util.h"

namespace tempspan {
namespace {

using testing::ScratchDir;
using testing::WriteFile;

std::string ExampleLine(const std::string& id, const std::string& inputs = "") {
  MaskedExample e;
  e.example_id = id;
  e.sent_id = id;
  e.span_type = "date";
  e.inputs = inputs.empty() ? id + " _X_" : inputs;
  e.targets = "t";
  e.span_start = 0;
  e.span_end = 1;
  return ToJsonLine(e);
}

// Writes `n` examples with ids "<name>0", "<name>1", ...
std::filesystem::path WriteComponent(const ScratchDir& dir, const std::string& name, int n) {
  std::string body;
  for (int i = 0; i < n; ++i) body += ExampleLine(name + std::to_string(i)) + "\n";
  const std::filesystem::path path = dir / (name + ".jsonl");
  WriteFile(path, body);
  return path;
}

std::vector<std::string> Ids(const MixtureSpec& spec, MixStats* stats = nullptr) {
  MixtureStream stream(spec);
  std::vector<std::string> ids;
  while (auto line = stream.Next()) ids.push_back(MaskedExampleFromJson(*line).example_id);
  if (stats != nullptr) *stats = stream.stats();
  return ids;
}

// |c_i * W - n * w_i| < W for every prefix, in exact integers.
void ExpectPrefixBound(const std::vector<uint64_t>& weights, uint64_t steps) {
  ProportionalScheduler scheduler(weights);
  unsigned __int128 total = 0;
  for (uint64_t w : weights) total += w;
  std::vector<uint64_t> counts(weights.size(), 0);
  for (uint64_t n = 1; n <= steps; ++n) {
    const size_t pick = scheduler.Next();
    ASSERT_LT(pick, weights.size());
    ++counts[pick];
    for (size_t i = 0; i < weights.size(); ++i) {
      const __int128 deviation = static_cast<__int128>(counts[i]) * static_cast<__int128>(total) -
                                 static_cast<__int128>(n) * weights[i];
      const __int128 abs_dev = deviation < 0 ? -deviation : deviation;
      ASSERT_LT(abs_dev, static_cast<__int128>(total))
          << "component " << i << " after " << n << " picks, " << weights.size() << " weights";
    }
  }
  EXPECT_EQ(scheduler.counts(), counts);
  EXPECT_EQ(scheduler.steps(), steps);
}

TEST(SchedulerTest, EqualWeightsAlternate) {
  ProportionalScheduler s({1, 1});
  std::vector<size_t> picks;
  for (int i = 0; i < 6; ++i) picks.push_back(s.Next());
  EXPECT_EQ(picks, (std::vector<size_t>{0, 1, 0, 1, 0, 1}));
  ProportionalScheduler three({5, 5, 5});
  picks.clear();
  for (int i = 0; i < 6; ++i) picks.push_back(three.Next());
  EXPECT_EQ(picks, (std::vector<size_t>{0, 1, 2, 0, 1, 2}));
}

TEST(SchedulerTest, ThreeToOneWindows) {
  ProportionalScheduler s({3, 1});
  std::vector<size_t> picks;
  for (int i = 0; i < 400; ++i) picks.push_back(s.Next());
  for (size_t start = 0; start + 4 <= picks.size(); start += 4) {
    EXPECT_EQ(std::count(picks.begin() + start, picks.begin() + start + 4, 1u), 1)
        << "window at " << start;
  }
}

TEST(SchedulerTest, SingleComponent) {
  ProportionalScheduler s({7});
  for (int i = 0; i < 10; ++i) EXPECT_EQ(s.Next(), 0u);
  EXPECT_THROW(ProportionalScheduler({}), ValidationError);
  EXPECT_THROW(ProportionalScheduler({1, 0}), ValidationError);
}

TEST(SchedulerPropertyTest, PrefixDeviationBelowOne) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const size_t k = 1 + rng() % 8;
    std::vector<uint64_t> weights;
    for (size_t i = 0; i < k; ++i) {
      weights.push_back(1 + rng() % (trial % 3 == 0 ? 5 : trial % 3 == 1 ? 1000 : 1000000));
    }
    ExpectPrefixBound(weights, 600);
    if (HasFatalFailure()) return;
  }
  ExpectPrefixBound({1, 1, 1, 1, 1, 1, 1, 1000000}, 3000);
  ExpectPrefixBound({4790, 11530, 11215}, 27535);
  ExpectPrefixBound({1ULL << 62, 1, 3}, 500);
}

TEST(SchedulerPropertyTest, FullCycleMatchesWeightsExactly) {
  const std::vector<uint64_t> weights = {3, 7, 2, 11};
  ProportionalScheduler s(weights);
  for (int i = 0; i < 23; ++i) s.Next();
  EXPECT_EQ(s.counts(), weights);
}

TEST(ResolveWeightsTest, IntegralAndFractional) {
  EXPECT_EQ(ResolveWeights({3, 1}), (std::vector<uint64_t>{3, 1}));
  EXPECT_EQ(ResolveWeights({0.5, 1.5}), (std::vector<uint64_t>{500000, 1500000}));
  EXPECT_EQ(ResolveWeights({2, 0.25}), (std::vector<uint64_t>{2000000, 250000}));
  EXPECT_THROW(ResolveWeights({1e-9}), ValidationError);
}

TEST(MixModeTest, Names) {
  EXPECT_EQ(ParseMixMode("exact"), MixMode::kExact);
  EXPECT_EQ(ParseMixMode("exhaust"), MixMode::kExhaust);
  EXPECT_FALSE(ParseMixMode("cycle"));
  EXPECT_EQ(ToString(MixMode::kExhaust), "exhaust");
}

TEST(MixtureStreamTest, DefaultWeightsEmitEveryExampleOnce) {
  ScratchDir dir;
  MixtureSpec spec;
  spec.components = {{"a", WriteComponent(dir, "a", 3), {}},
                     {"b", WriteComponent(dir, "b", 9), {}}};
  for (MixMode mode : {MixMode::kExact, MixMode::kExhaust}) {
    spec.mode = mode;
    MixStats stats;
    std::vector<std::string> ids = Ids(spec, &stats);
    EXPECT_EQ(stats.emitted, 12u);
    EXPECT_EQ(stats.per_component, (std::vector<uint64_t>{3, 9}));
    EXPECT_EQ(stats.weights, (std::vector<uint64_t>{3, 9}));
    // Each file's own order is kept.
    std::vector<std::string> a_ids;
    std::copy_if(ids.begin(), ids.end(), std::back_inserter(a_ids),
                 [](const std::string& s) { return s[0] == 'a'; });
    EXPECT_EQ(a_ids, (std::vector<std::string>{"a0", "a1", "a2"}));
    std::sort(ids.begin(), ids.end());
    std::vector<std::string> expected = {"a0", "a1", "a2"};
    for (int i = 0; i < 9; ++i) expected.push_back("b" + std::to_string(i));
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(ids, expected);
  }
}

TEST(MixtureStreamTest, ExactModeStopsAtFirstShortfall) {
  ScratchDir dir;
  MixtureSpec spec;
  spec.components = {{"a", WriteComponent(dir, "a", 2), 1.0},
                     {"b", WriteComponent(dir, "b", 10), 1.0}};
  EXPECT_EQ(Ids(spec), (std::vector<std::string>{"a0", "b0", "a1", "b1"}));
}

TEST(MixtureStreamTest, ExhaustModeCyclesShortComponents) {
  ScratchDir dir;
  MixtureSpec spec;
  spec.mode = MixMode::kExhaust;
  spec.components = {{"a", WriteComponent(dir, "a", 2), 1.0},
                     {"b", WriteComponent(dir, "b", 5), 1.0}};
  EXPECT_EQ(Ids(spec), (std::vector<std::string>{"a0", "b0", "a1", "b1", "a0", "b2", "a1", "b3",
                                                 "a0", "b4"}));
}

TEST(MixtureStreamTest, ExhaustConservationOnRandomSizes) {
  ScratchDir dir;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    MixtureSpec spec;
    spec.mode = MixMode::kExhaust;
    const size_t k = 1 + rng() % 4;
    std::vector<int> sizes;
    for (size_t i = 0; i < k; ++i) {
      const std::string name = "c" + std::to_string(trial) + "_" + std::to_string(i);
      sizes.push_back(1 + static_cast<int>(rng() % 12));
      spec.components.push_back(
          {name, WriteComponent(dir, name, sizes.back()), 1.0 + static_cast<double>(rng() % 4)});
    }
    MixStats stats;
    const std::vector<std::string> ids = Ids(spec, &stats);
    std::map<std::string, int> seen;
    for (const std::string& id : ids) ++seen[id];
    // Every example appears.
    for (size_t i = 0; i < k; ++i) {
      for (int j = 0; j < sizes[i]; ++j) {
        EXPECT_GE(seen[spec.components[i].name + std::to_string(j)], 1);
      }
    }
    // The stream ends at the first step where every component has finished
    // one pass under the schedule.
    ProportionalScheduler replay(stats.weights);
    uint64_t steps = 0;
    auto all_done = [&] {
      for (size_t i = 0; i < k; ++i) {
        if (replay.counts()[i] < static_cast<uint64_t>(sizes[i])) return false;
      }
      return true;
    };
    while (!all_done()) {
      replay.Next();
      ++steps;
    }
    EXPECT_EQ(stats.emitted, steps);
    EXPECT_EQ(stats.per_component, replay.counts());
    EXPECT_EQ(stats.emitted, ids.size());
  }
}

TEST(MixtureStreamTest, DedupDropsRepeatedPairs) {
  ScratchDir dir;
  WriteFile(dir / "a.jsonl", ExampleLine("a0", "same _X_") + "\n" + ExampleLine("a1", "same _X_") +
                                 "\n" + ExampleLine("a2") + "\n");
  WriteFile(dir / "b.jsonl", ExampleLine("b0", "same _X_") + "\n" + ExampleLine("b1") + "\n");
  MixtureSpec spec;
  spec.dedup_inputs = true;
  spec.components = {{"a", dir / "a.jsonl", {}}, {"b", dir / "b.jsonl", {}}};
  MixStats stats;
  const std::vector<std::string> ids = Ids(spec, &stats);
  EXPECT_EQ(stats.duplicates_dropped, 2u);
  EXPECT_EQ(std::count(ids.begin(), ids.end(), "a0"), 1);
  EXPECT_EQ(std::count(ids.begin(), ids.end(), "a1"), 0);
  EXPECT_EQ(std::count(ids.begin(), ids.end(), "b0"), 0);
  EXPECT_EQ(stats.emitted, ids.size());
}

TEST(MixtureStreamTest, ShuffleIsSeededPermutation) {
  ScratchDir dir;
  MixtureSpec spec;
  spec.shuffle = true;
  spec.seed = 11;
  spec.components = {{"a", WriteComponent(dir, "a", 50), {}}};
  const std::vector<std::string> first = Ids(spec);
  EXPECT_EQ(Ids(spec), first);
  spec.seed = 12;
  const std::vector<std::string> other = Ids(spec);
  EXPECT_NE(other, first);
  std::vector<std::string> sorted_first = first;
  std::vector<std::string> sorted_other = other;
  std::sort(sorted_first.begin(), sorted_first.end());
  std::sort(sorted_other.begin(), sorted_other.end());
  EXPECT_EQ(sorted_first, sorted_other);
  EXPECT_EQ(first.size(), 50u);
}

TEST(MixtureStreamTest, InputErrors) {
  ScratchDir dir;
  WriteFile(dir / "empty.jsonl", "\n");
  WriteFile(dir / "bad.jsonl", ExampleLine("x0") + "\n{\"oops\": 1}\n");
  MixtureSpec spec;
  spec.components = {{"e", dir / "empty.jsonl", {}}};
  EXPECT_THROW(MixtureStream{spec}, ValidationError);
  spec.components = {{"m", dir / "missing.jsonl", {}}};
  EXPECT_THROW(MixtureStream{spec}, IoError);
  spec.components = {{"b", dir / "bad.jsonl", {}}};
  MixtureStream stream(spec);
  EXPECT_TRUE(stream.Next().has_value());
  try {
    stream.Next();
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.jsonl:2: "), std::string::npos) << e.what();
  }
}

TEST(MixTest, WritesLinesVerbatim) {
  ScratchDir dir;
  MixtureSpec spec;
  spec.components = {{"a", WriteComponent(dir, "a", 1), {}}, {"b", WriteComponent(dir, "b", 1), {}}};
  std::ostringstream out;
  const MixStats stats = Mix(spec, out);
  EXPECT_EQ(out.str(), ExampleLine("a0") + "\n" + ExampleLine("b0") + "\n");
  EXPECT_EQ(stats.emitted, 2u);
}

TEST(MixtureSpecTest, TomlAndJsonAgree) {
  ScratchDir dir;
  WriteComponent(dir, "tsm", 3);
  WriteComponent(dir, "ssm", 3);
  WriteFile(dir / "mix.toml",
            "mode = \"exhaust\"\nseed = 7\nshuffle = true\n\n"
            "[[components]]\nname = \"tsm\"\npath = \"tsm.jsonl\"\nweight = 3\n\n"
            "[[components]]\nname = \"ssm\"\npath = \"ssm.jsonl\"\nweight = 0.5\n");
  WriteFile(dir / "mix.json",
            R"({"mode": "exhaust", "seed": 7, "shuffle": true, "components": [)"
            R"({"name": "tsm", "path": "tsm.jsonl", "weight": 3},)"
            R"({"name": "ssm", "path": "ssm.jsonl", "weight": 0.5}]})");
  const MixtureSpec toml = LoadMixtureSpec(dir / "mix.toml");
  const MixtureSpec json = LoadMixtureSpec(dir / "mix.json");
  for (const MixtureSpec* spec : {&toml, &json}) {
    EXPECT_EQ(spec->mode, MixMode::kExhaust);
    EXPECT_EQ(spec->seed, 7u);
    EXPECT_TRUE(spec->shuffle);
    EXPECT_FALSE(spec->dedup_inputs);
    ASSERT_EQ(spec->components.size(), 2u);
    EXPECT_EQ(spec->components[0].path, dir / "tsm.jsonl");
    EXPECT_EQ(spec->components[0].weight, 3.0);
    EXPECT_EQ(spec->components[1].weight, 0.5);
  }
  EXPECT_EQ(Ids(toml), Ids(json));

  const MixtureSpec defaults = ParseMixtureSpecToml(
      "[[components]]\nname = \"a\"\npath = \"/abs/a.jsonl\"\n", "/base");
  EXPECT_EQ(defaults.mode, MixMode::kExact);
  EXPECT_EQ(defaults.components[0].path, "/abs/a.jsonl");
  EXPECT_FALSE(defaults.components[0].weight.has_value());
}

TEST(MixtureSpecTest, ValidationErrors) {
  const std::string c = "[[components]]\nname = \"a\"\npath = \"a.jsonl\"\n";
  EXPECT_THROW(ParseMixtureSpecToml("mode = \"exact\"\n"), FormatError);
  EXPECT_THROW(ParseMixtureSpecToml("mode = \"cycle\"\n" + c), FormatError);
  EXPECT_THROW(ParseMixtureSpecToml(c + "weight = 0\n"), ValidationError);
  EXPECT_THROW(ParseMixtureSpecToml(c + "weight = -2\n"), ValidationError);
  EXPECT_THROW(ParseMixtureSpecToml(c + "weight = nan\n"), ValidationError);
  EXPECT_THROW(ParseMixtureSpecToml(c + "weight = \"x\"\n"), FormatError);
  EXPECT_THROW(ParseMixtureSpecToml(c + c), ValidationError);
  EXPECT_THROW(ParseMixtureSpecToml("[[components]]\nname = \"\"\npath = \"a\"\n"),
               ValidationError);
  EXPECT_THROW(ParseMixtureSpecToml("[[components]]\nname = \"a\"\n"), FormatError);
  EXPECT_THROW(ParseMixtureSpecToml("mode = \"exhaust\"\ndedup_inputs = true\n" + c),
               ValidationError);
  try {
    ParseMixtureSpecToml("seed = 1\nmode = = 2\n");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(ParseMixtureSpecJson("[1]"), FormatError);
  EXPECT_THROW(ParseMixtureSpecJson(R"({"components": [{"name": "a"}]})"), FormatError);
  EXPECT_THROW(ParseMixtureSpecJson(R"({"components": []})"), ValidationError);
  EXPECT_THROW(LoadMixtureSpec("/nonexistent/mix.toml"), IoError);
}

}  // namespace
}  // namespace tempspan
