// Copyright 2026 The corpusprep Authors.
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


#include "corpusprep/normalize_filter.h"

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corpusprep/utf8.h"
#include "gtest/gtest.h"

namespace corpusprep {
namespace {

std::string Tokens(std::size_t n, const std::string& token = "w") {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += token;
  }
  return out;
}

// `chinese` Han tokens, `english` ASCII-letter tokens, the rest digits.
Sentence Mixed(int total, int chinese, int english) {
  std::string s;
  for (int i = 0; i < total; ++i) {
    if (i) s += ' ';
    s += i < chinese ? "中文" : i < chinese + english ? "word" : "123";
  }
  return Sentence(s);
}

TEST(NfkcTest, CompatibilityMappings) {
  EXPECT_EQ(NfkcNormalize("Ａ１"), "A1");
  EXPECT_EQ(NfkcNormalize("abc def"), "abc def");
  EXPECT_EQ(NfkcNormalize("ﬁ"), "fi");
  EXPECT_EQ(NfkcNormalize("ｶ"), "カ");
  EXPECT_EQ(NfkcNormalize("é"), "é");
  EXPECT_EQ(NfkcNormalize(""), "");
}

TEST(NfkcTest, RejectsIllFormedInput) {
  EXPECT_THROW(NfkcNormalize("a\xff"), std::invalid_argument);
  EXPECT_THROW(NfkcNormalize("\xed\xa0\x80"), std::invalid_argument);
}

TEST(NfkcTest, IdempotentOnRandomUnicode) {
  // Ranges rich in compatibility and combining behaviour.
  const std::vector<std::pair<char32_t, char32_t>> ranges = {
      {0x20, 0x7e},     {0xa0, 0x24f},   {0x300, 0x36f},  {0x1100, 0x11ff},
      {0x3000, 0x30ff}, {0x3200, 0x33ff}, {0x4e00, 0x4fff}, {0xac00, 0xac40},
      {0xfb00, 0xfb4f}, {0xff00, 0xffef}, {0x1d400, 0x1d7ff}, {0x2460, 0x24ff}};
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 3000; ++trial) {
    std::u32string s;
    const int n = std::uniform_int_distribution<int>(0, 24)(rng);
    for (int i = 0; i < n; ++i) {
      const auto& [lo, hi] = ranges[std::uniform_int_distribution<std::size_t>(
          0, ranges.size() - 1)(rng)];
      s.push_back(std::uniform_int_distribution<char32_t>(lo, hi)(rng));
    }
    const std::string once = NfkcNormalize(utf8::Encode(s));
    ASSERT_TRUE(utf8::IsValid(once));
    ASSERT_EQ(NfkcNormalize(once), once) << utf8::Encode(s);
  }
}

TEST(FilterRuleTest, Validate) {
  FilterRule rule;
  EXPECT_NO_THROW(rule.Validate());
  rule.min_tokens = 0;
  EXPECT_THROW(rule.Validate(), std::invalid_argument);
  rule = FilterRule{};
  rule.min_tokens = 80;
  EXPECT_THROW(rule.Validate(), std::invalid_argument);
  rule = FilterRule{};
  rule.cjk_min_ratio = 1.5;
  EXPECT_THROW(rule.Validate(), std::invalid_argument);
}

TEST(TokenLengthFilterTest, PaperBoundaries) {
  const FilterRule rule;
  EXPECT_FALSE(TokenLengthFilter(2, rule).keep);
  EXPECT_STREQ(TokenLengthFilter(2, rule).reason, reason::kTooShort);
  EXPECT_TRUE(TokenLengthFilter(3, rule).keep);
  EXPECT_TRUE(TokenLengthFilter(79, rule).keep);
  EXPECT_FALSE(TokenLengthFilter(80, rule).keep);
  EXPECT_STREQ(TokenLengthFilter(80, rule).reason, reason::kTooLong);
  EXPECT_TRUE(TokenLengthFilter(Sentence(Tokens(79)), rule).keep);
  EXPECT_FALSE(TokenLengthFilter(Sentence(Tokens(80)), rule).keep);
}

TEST(ClassifyTokenTest, CodepointHeuristic) {
  EXPECT_EQ(ClassifyToken("中"), TokenClass::kChinese);
  EXPECT_EQ(ClassifyToken("a中"), TokenClass::kChinese);
  EXPECT_EQ(ClassifyToken("㐀"), TokenClass::kChinese);
  EXPECT_EQ(ClassifyToken("Word"), TokenClass::kEnglish);
  EXPECT_EQ(ClassifyToken("word1"), TokenClass::kOther);
  EXPECT_EQ(ClassifyToken("café"), TokenClass::kOther);
  EXPECT_EQ(ClassifyToken("かな"), TokenClass::kOther);
}

TEST(CjkRatioFilterTest, PaperExamples) {
  FilterRule rule;
  rule.cjk_filter_enabled = true;
  EXPECT_FALSE(CjkRatioFilter(Mixed(10, 2, 0), rule).keep);
  EXPECT_STREQ(CjkRatioFilter(Mixed(10, 2, 0), rule).reason,
               reason::kLowCjkRatio);
  EXPECT_TRUE(CjkRatioFilter(Mixed(10, 3, 3), rule).keep);
  EXPECT_TRUE(CjkRatioFilter(Mixed(10, 10, 0), rule).keep);
  EXPECT_FALSE(CjkRatioFilter(Mixed(10, 5, 4), rule).keep);
  EXPECT_STREQ(CjkRatioFilter(Mixed(10, 5, 4), rule).reason,
               reason::kHighAsciiRatio);
  EXPECT_STREQ(CjkRatioFilter(Sentence(""), rule).reason, reason::kEmpty);
}

TEST(CjkRatioFilterTest, ExactBoundariesAtOtherDenominators) {
  FilterRule rule;
  rule.cjk_filter_enabled = true;
  // 0.3 is exactly representable as 3/10, 6/20, 9/30, ...
  for (int k = 1; k <= 10; ++k) {
    EXPECT_TRUE(CjkRatioFilter(Mixed(10 * k, 3 * k, 3 * k), rule).keep) << k;
    EXPECT_FALSE(CjkRatioFilter(Mixed(10 * k, 3 * k - 1, 0), rule).keep) << k;
    EXPECT_FALSE(CjkRatioFilter(Mixed(10 * k, 5 * k, 3 * k + 1), rule).keep) << k;
  }
}

TEST(LineFilterTest, OrderOfChecks) {
  FilterRule rule;
  rule.cjk_filter_enabled = true;
  LineFilter f(rule);
  EXPECT_STREQ(f.Decide("\xff a b").reason, reason::kInvalidUtf8);
  EXPECT_STREQ(f.Decide("   ").reason, reason::kEmpty);
  EXPECT_STREQ(f.Decide("中 文").reason, reason::kTooShort);
  EXPECT_STREQ(f.Decide("a b c").reason, reason::kLowCjkRatio);
  EXPECT_TRUE(f.Decide("中 文 字").keep);
}

TEST(FilterPipelineTest, FiveLinesTwoTooShort) {
  std::istringstream in("a b c\nx\nd e f g\ny z\nh i j\n");
  std::ostringstream out;
  const auto r = RunFilterPipeline(in, out, FilterRule{});
  EXPECT_EQ(out.str(), "a b c\nd e f g\nh i j\n");
  EXPECT_EQ(r.lines_read, 5u);
  EXPECT_EQ(r.lines_selected, 3u);
  EXPECT_EQ(r.rejections, (std::map<std::string, std::uint64_t>{{"too_short", 2}}));
  EXPECT_TRUE(r.Conserved());
}

TEST(FilterPipelineTest, AllValidPassThroughAndEmptyInput) {
  std::istringstream in("a b c\nd e f\n");
  std::ostringstream out;
  auto r = RunFilterPipeline(in, out, FilterRule{});
  EXPECT_EQ(r.lines_read, r.lines_selected);
  EXPECT_EQ(out.str(), "a b c\nd e f\n");

  std::istringstream empty("");
  std::ostringstream out2;
  r = RunFilterPipeline(empty, out2, FilterRule{});
  EXPECT_EQ(out2.str(), "");
  EXPECT_EQ(r.lines_read, 0u);
  EXPECT_TRUE(r.rejections.empty());
}

TEST(FilterPipelineTest, SubsequenceConservationAndPurity) {
  std::mt19937_64 rng(99);
  const std::vector<std::string> pool = {"中", "文字", "en", "x1", "\xfe", "の"};
  FilterRule rule;
  rule.min_tokens = 2;
  rule.max_tokens = 6;
  rule.cjk_filter_enabled = true;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> lines;
    const int n = std::uniform_int_distribution<int>(0, 40)(rng);
    for (int i = 0; i < n; ++i) {
      std::string l;
      const int len = std::uniform_int_distribution<int>(0, 8)(rng);
      for (int k = 0; k < len; ++k) {
        if (k) l += ' ';
        l += pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
      }
      lines.push_back(l);
    }
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    std::istringstream in(text);
    std::ostringstream out;
    const auto r = RunFilterPipeline(in, out, rule);
    EXPECT_TRUE(r.Conserved());
    EXPECT_EQ(r.lines_read, lines.size());

    // Output is the subsequence of lines whose isolated decision is keep.
    std::string expected;
    LineFilter f(rule);
    for (const auto& l : lines) {
      if (f.Decide(l).keep) expected += l + "\n";
    }
    EXPECT_EQ(out.str(), expected);
    EXPECT_EQ(r.lines_selected,
              static_cast<std::uint64_t>(std::count(expected.begin(), expected.end(), '\n')));
  }
}

TEST(NormalizePipelineTest, RejectsInvalidAndNormalizesRest) {
  std::istringstream in("Ａ１ b\nbad\xff\n\nok\n");
  std::ostringstream out;
  const auto r = RunNormalizePipeline(in, out);
  EXPECT_EQ(out.str(), "A1 b\n\nok\n");
  EXPECT_EQ(r.lines_read, 4u);
  EXPECT_EQ(r.lines_selected, 3u);
  EXPECT_EQ(r.rejections.at("invalid_utf8"), 1u);
}

}  // namespace
}  // namespace corpusprep
