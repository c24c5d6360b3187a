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


#include "tempspan/unicode.h"

#include <random>
#include <string>

#include "gtest/gtest.h"
#include "test_util.h"

namespace tempspan::unicode {
namespace {

TEST(UnicodeTest, DecodeEncodeRoundTrip) {
  const std::string text = "a\xC3\xA9\xE2\x82\xAC\xF0\x9F\x98\x80z";  // a é € 😀 z
  const std::u32string decoded = Decode(text);
  ASSERT_EQ(decoded.size(), 5u);
  EXPECT_EQ(decoded[1], U'é');
  EXPECT_EQ(decoded[2], U'€');
  EXPECT_EQ(decoded[3], U'\U0001F600');
  EXPECT_EQ(Encode(decoded), text);
}

TEST(UnicodeTest, IllFormedBytesBecomeReplacementCharacters) {
  EXPECT_EQ(Decode("a\xFF" "b"), std::u32string(U"a�b"));
  EXPECT_EQ(Decode("\xC3"), std::u32string(U"�"));
  // Overlong encoding of '/'.
  EXPECT_EQ(Decode("\xC0\xAF"), std::u32string(U"��"));
  // Surrogate code points are not scalars.
  EXPECT_EQ(Decode("\xED\xA0\x80").find(static_cast<char32_t>(0xD800)), std::u32string::npos);
}

TEST(UnicodeTest, LengthAndSliceCountScalars) {
  const std::string text = "S\xC3\xA3o Paulo";  // São Paulo
  EXPECT_EQ(Length(text), 9u);
  EXPECT_EQ(Slice(text, 0, 3), "S\xC3\xA3o");
  EXPECT_EQ(Slice(text, 4, 9), "Paulo");
  EXPECT_EQ(ByteOffset(text, 3), 4u);
  EXPECT_EQ(ByteOffset(text, 100), text.size());
}

TEST(UnicodeTest, LengthAgreesWithIndependentCountOnRandomText) {
  std::mt19937 rng(7);
  const char32_t pool[] = {U'a', U'Z', U' ', U'é', U'中', U'\U0001F600', U'.'};
  for (int trial = 0; trial < 500; ++trial) {
    std::u32string s;
    const int n = static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) s.push_back(pool[rng() % std::size(pool)]);
    const std::string utf8 = Encode(s);
    EXPECT_EQ(Length(utf8), testing::CountScalars(utf8));
    EXPECT_EQ(Decode(utf8), s);
  }
}

TEST(UnicodeTest, NfcComposes) {
  EXPECT_EQ(NormalizeNfc("e\xCC\x81"), "\xC3\xA9");  // e + combining acute
  EXPECT_EQ(NormalizeNfc("plain"), "plain");
  EXPECT_EQ(NormalizeNfc(""), "");
}

TEST(UnicodeTest, CharacterClasses) {
  EXPECT_TRUE(IsUpper(U'A'));
  EXPECT_TRUE(IsUpper(U'É'));  // É
  EXPECT_TRUE(IsUpper(U'ǅ'));  // titlecase Dž
  EXPECT_FALSE(IsUpper(U'a'));
  EXPECT_FALSE(IsUpper(U'1'));
  EXPECT_TRUE(IsSpace(U' '));
  EXPECT_TRUE(IsSpace(U' '));
  EXPECT_TRUE(IsSpace(U'\n'));
  EXPECT_FALSE(IsSpace(U'x'));
  EXPECT_TRUE(IsAlnum(U'7'));
  EXPECT_TRUE(IsAlnum(U'é'));
  EXPECT_FALSE(IsAlnum(U'-'));
}

TEST(UnicodeTest, AsciiLowerLeavesOtherBytes) {
  EXPECT_EQ(AsciiLower("MaRCH \xC3\x89t\xC3\xA9"), "march \xC3\x89t\xC3\xA9");
}

}  // namespace
}  // namespace tempspan::unicode
