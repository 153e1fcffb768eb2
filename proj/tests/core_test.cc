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


#include "corpusprep/core.h"

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace corpusprep {
namespace {

TEST(SentenceTest, SplitsOnAsciiWhitespace) {
  const Sentence s("  a\tbb  c \r");
  ASSERT_EQ(s.length(), 3u);
  EXPECT_EQ(s.token(0), "a");
  EXPECT_EQ(s.token(1), "bb");
  EXPECT_EQ(s.token(2), "c");
  for (auto t : s.tokens()) {
    EXPECT_EQ(t.find_first_of(" \t\r\n\v\f"), std::string_view::npos);
  }
}

TEST(SentenceTest, BlankLineHasLengthZero) {
  EXPECT_TRUE(Sentence("").empty());
  EXPECT_TRUE(Sentence(" \t ").empty());
  EXPECT_EQ(Sentence("x").length(), 1u);
}

TEST(SentenceTest, CopiesKeepValidTokens) {
  Sentence a("hello world");
  const Sentence b = a;
  a = Sentence("other");
  EXPECT_EQ(b.token(1), "world");
}

TEST(LineLengthTest, TokensAndCharacters) {
  EXPECT_EQ(LineLength("a bc", LengthUnit::kTokens), 2u);
  EXPECT_EQ(LineLength("日本 語", LengthUnit::kCharacters), 4u);
}

TEST(LengthDistributionTest, EmptyStream) {
  std::istringstream in("");
  const auto d = ComputeLengthDistribution(in);
  EXPECT_TRUE(d.counts().empty());
  EXPECT_EQ(d.total(), 0u);
}

TEST(LengthDistributionTest, HandCountedExample) {
  const auto d = ComputeLengthDistribution(
      std::vector<std::string>{"a b", "a b", "a b c d"});
  EXPECT_EQ(d.counts(), (std::map<std::size_t, std::uint64_t>{{2, 2}, {4, 1}}));
  EXPECT_EQ(d.total(), 3u);
}

TEST(LengthDistributionTest, UniformInput) {
  std::vector<std::string> lines(1872, "1 2 3 4 5 6 7 8 9 10");
  const auto d = ComputeLengthDistribution(lines);
  EXPECT_EQ(d.counts(), (std::map<std::size_t, std::uint64_t>{{10, 1872}}));
  EXPECT_EQ(d.total(), 1872u);
}

TEST(LengthDistributionTest, BlankLinesCountAtZero) {
  std::istringstream in("a\n\n   \nb c\n");
  const auto d = ComputeLengthDistribution(in);
  EXPECT_EQ(d.count(0), 2u);
  EXPECT_EQ(d.total(), 4u);
}

TEST(LengthDistributionTest, OrderInvariantAndShardMergeExact) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> lines;
    const int n = std::uniform_int_distribution<int>(0, 200)(rng);
    for (int i = 0; i < n; ++i) {
      lines.push_back(std::string(
          2 * std::uniform_int_distribution<int>(0, 12)(rng), 'x'));
      for (std::size_t k = 1; k < lines.back().size(); k += 2) lines.back()[k] = ' ';
    }
    const auto whole = ComputeLengthDistribution(lines);
    EXPECT_EQ(whole.total(), lines.size());

    auto shuffled = lines;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(ComputeLengthDistribution(shuffled), whole);

    const std::size_t shards = 1 + trial % 5;
    LengthDistribution merged;
    for (std::size_t s = 0; s < shards; ++s) {
      std::vector<std::string> part;
      for (std::size_t i = s; i < lines.size(); i += shards) part.push_back(lines[i]);
      merged.Merge(ComputeLengthDistribution(part));
    }
    EXPECT_EQ(merged, whole);
  }
}

TEST(LengthDistributionTest, TsvRoundTrip) {
  LengthDistribution d;
  d.Add(10, 3);
  d.Add(2, 1);
  d.Add(0, 4);
  std::ostringstream out;
  d.WriteTsv(out);
  EXPECT_EQ(out.str(), "0\t4\n2\t1\n10\t3\n");
  std::istringstream in(out.str());
  EXPECT_EQ(LengthDistribution::ReadTsv(in), d);
}

TEST(LengthDistributionTest, TsvRejectsMalformedRows) {
  for (const char* bad : {"2\t1\n1\t1\n", "2\t1\n2\t3\n", "x\t1\n", "3\n",
                          "3\t-1\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(LengthDistribution::ReadTsv(in), FormatError) << bad;
  }
}

TEST(CorpusStatsTest, HandExample) {
  std::istringstream in("a\na b\na b c\n");
  const auto s = ComputeCorpusStats(in);
  EXPECT_EQ(s.lines, 3u);
  EXPECT_EQ(s.tokens, 6u);
  ASSERT_TRUE(s.median_length.has_value());
  EXPECT_EQ(*s.median_length, 2.0);
  EXPECT_EQ(*s.min_length, 1u);
  EXPECT_EQ(*s.max_length, 3u);
  EXPECT_EQ(s.distinct_lengths, 3u);
}

TEST(CorpusStatsTest, EmptyCorpus) {
  std::istringstream in("");
  const auto s = ComputeCorpusStats(in);
  EXPECT_EQ(s.lines, 0u);
  EXPECT_FALSE(s.median_length.has_value());
  EXPECT_FALSE(s.min_length.has_value());
  EXPECT_TRUE(s.ToJson()["median_length"].is_null());
}

TEST(CorpusStatsTest, SingleLine) {
  std::istringstream in("x x x x\n");
  const auto s = ComputeCorpusStats(in);
  EXPECT_EQ(*s.min_length, 4u);
  EXPECT_EQ(*s.median_length, 4.0);
  EXPECT_EQ(*s.max_length, 4u);
}

TEST(CorpusStatsTest, EvenCountMedianAveragesMiddlePair) {
  LengthDistribution d;
  d.Add(1);
  d.Add(2);
  d.Add(5);
  d.Add(9);
  EXPECT_EQ(*Summarize(d).median_length, 3.5);
}

TEST(SelectionReportTest, ConservationAndJsonRoundTrip) {
  SelectionReport r;
  r.seed = 9;
  r.Select();
  r.Reject("too_short");
  r.Reject("too_short");
  r.Reject("empty");
  r.counters["x"] = 2;
  r.warnings.push_back("w");
  EXPECT_TRUE(r.Conserved());
  EXPECT_EQ(r.rejected(), 3u);
  const auto j = r.ToJson();
  EXPECT_EQ(j["lines_read"], 4);
  EXPECT_EQ(j["rejections"]["too_short"], 2);
  const auto back = SelectionReport::FromJson(j);
  EXPECT_EQ(back.ToJson(), j);

  SelectionReport other;
  other.Reject("empty");
  r.Merge(other);
  EXPECT_EQ(r.lines_read, 5u);
  EXPECT_EQ(r.rejections["empty"], 2u);
  EXPECT_TRUE(r.Conserved());
}

TEST(LineIoTest, FinalLineWithoutNewlineCounts) {
  testing::TempDir dir;
  const auto path = dir.File("x.txt");
  testing::WriteFile(path, "a\nb\nc");
  EXPECT_EQ(CountLinesInFile(path), 3u);
  EXPECT_EQ(ReadLinesFromFile(path), (std::vector<std::string>{"a", "b", "c"}));
  testing::WriteFile(path, "");
  EXPECT_EQ(CountLinesInFile(path), 0u);
  EXPECT_THROW(ReadLinesFromFile(dir.File("missing")), Error);
}

}  // namespace
}  // namespace corpusprep
