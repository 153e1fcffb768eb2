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


#include "corpusprep/mixing.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corpusprep/checksum.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace corpusprep {
namespace {

std::vector<std::uint64_t> PerCorpus(const std::vector<MixEntry>& plan,
                                     std::size_t corpora) {
  std::vector<std::uint64_t> counts(corpora, 0);
  for (const auto& e : plan) ++counts[e.corpus];
  return counts;
}

TEST(PlanTest, EqualSizesNoOversampling) {
  const auto plan = PlanOversampleMix({5, 5}, 1);
  EXPECT_EQ(plan.size(), 10u);
  EXPECT_EQ(PerCorpus(plan, 2), (std::vector<std::uint64_t>{5, 5}));
}

TEST(PlanTest, FloorCopiesPlusRemainderSample) {
  const auto plan = PlanOversampleMix({2, 5}, 9);
  EXPECT_EQ(plan.size(), 10u);
  EXPECT_EQ(PerCorpus(plan, 2), (std::vector<std::uint64_t>{5, 5}));
  std::map<std::size_t, int> ja;
  for (const auto& e : plan) {
    if (e.corpus == 0) ++ja[e.line];
  }
  // Two full copies and one extra line.
  ASSERT_EQ(ja.size(), 2u);
  EXPECT_EQ(ja[0] + ja[1], 5);
  EXPECT_TRUE((ja[0] == 3 && ja[1] == 2) || (ja[0] == 2 && ja[1] == 3));
}

TEST(PlanTest, SingleCorpusIsAPermutation) {
  const auto plan = PlanOversampleMix({7}, 3);
  std::vector<int> seen(7, 0);
  for (const auto& e : plan) ++seen[e.line];
  EXPECT_EQ(seen, std::vector<int>(7, 1));
}

TEST(PlanTest, RandomSizesContributeExactlyTheMaximum) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::uint64_t> sizes(1 + rng() % 5);
    for (auto& s : sizes) s = 1 + rng() % 200;
    const std::uint64_t m = *std::max_element(sizes.begin(), sizes.end());
    const std::uint64_t seed = rng();
    const auto plan = PlanOversampleMix(sizes, seed);
    EXPECT_EQ(PerCorpus(plan, sizes.size()), std::vector<std::uint64_t>(sizes.size(), m));
    // Each line appears floor(m / n) or floor(m / n) + 1 times.
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> uses;
    for (const auto& e : plan) {
      ASSERT_LT(e.line, sizes[e.corpus]);
      ++uses[{e.corpus, e.line}];
    }
    for (const auto& [key, n] : uses) {
      const std::uint64_t base = m / sizes[key.first];
      EXPECT_TRUE(n == base || n == base + 1);
    }
    EXPECT_EQ(uses.size(), std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0}));
    const auto again = PlanOversampleMix(sizes, seed);
    ASSERT_EQ(again.size(), plan.size());
    for (std::size_t i = 0; i < plan.size(); ++i) {
      EXPECT_EQ(again[i].corpus, plan[i].corpus);
      EXPECT_EQ(again[i].line, plan[i].line);
    }
  }
}

TEST(PlanTest, Errors) {
  EXPECT_THROW(PlanOversampleMix({}, 1), Error);
  EXPECT_THROW(PlanOversampleMix({3, 0}, 1), Error);
}

TEST(ParseCorpusArgTest, TagAndPath) {
  const auto c = ParseCorpusArg("zh-mapped:data/zh:x.txt");
  EXPECT_EQ(c.language_tag, "zh-mapped");
  EXPECT_EQ(c.path, "data/zh:x.txt");
  EXPECT_THROW(ParseCorpusArg("nopath"), std::invalid_argument);
  EXPECT_THROW(ParseCorpusArg(":x"), std::invalid_argument);
  EXPECT_THROW(ParseCorpusArg("ja:"), std::invalid_argument);
}

class OversampleMixTest : public ::testing::Test {
 protected:
  void SetUp() override {
    testing::WriteFile(dir_.File("ja.txt"), "ja0\nja1\n");
    testing::WriteFile(dir_.File("zh.txt"), "zh0\nzh1\nzh2\nzh3\nzh4\n");
    testing::WriteFile(dir_.File("fr.txt"), "fr0\nfr1\nfr2");
  }

  std::vector<LanguageCorpus> Corpora() {
    return {ParseCorpusArg("ja:" + dir_.File("ja.txt")),
            ParseCorpusArg("zh:" + dir_.File("zh.txt")),
            ParseCorpusArg("fr:" + dir_.File("fr.txt"))};
  }

  testing::TempDir dir_;
};

TEST_F(OversampleMixTest, LinesTagsAndReport) {
  auto corpora = Corpora();
  std::ostringstream out, tags;
  const auto r = OversampleMix(corpora, 11, out, tags);
  EXPECT_EQ(corpora[2].line_count, 3u);
  std::istringstream tag_in(tags.str());
  const auto tag_rows = ReadTagFile(tag_in);
  std::istringstream line_in(out.str());
  std::string line;
  std::map<std::string, int> per_tag;
  for (std::size_t i = 0; std::getline(line_in, line); ++i) {
    ASSERT_LT(i, tag_rows.size());
    EXPECT_EQ(line.substr(0, 2), tag_rows[i]);
    ++per_tag[tag_rows[i]];
  }
  EXPECT_EQ(per_tag, (std::map<std::string, int>{{"ja", 5}, {"zh", 5}, {"fr", 5}}));
  EXPECT_EQ(r.lines_read, 10u);
  EXPECT_EQ(r.lines_selected, 10u);
  EXPECT_EQ(r.lines_written, 15u);
  EXPECT_EQ(r.counters.at("oversampled_lines"), 5u);
  EXPECT_TRUE(r.Conserved());
}

TEST_F(OversampleMixTest, SeedDeterminismByChecksum) {
  auto a = Corpora(), b = Corpora(), c = Corpora();
  std::ostringstream oa, ta, ob, tb, oc, tc;
  OversampleMix(a, 5, oa, ta);
  OversampleMix(b, 5, ob, tb);
  OversampleMix(c, 6, oc, tc);
  EXPECT_EQ(Sha256Hex(oa.str()), Sha256Hex(ob.str()));
  EXPECT_EQ(Sha256Hex(ta.str()), Sha256Hex(tb.str()));
  EXPECT_NE(oa.str() + ta.str(), oc.str() + tc.str());
}

TEST_F(OversampleMixTest, EmptyCorpusNamesItsTag) {
  testing::WriteFile(dir_.File("en.txt"), "");
  auto corpora = Corpora();
  corpora.push_back(ParseCorpusArg("en:" + dir_.File("en.txt")));
  std::ostringstream out, tags;
  try {
    OversampleMix(corpora, 1, out, tags);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("`en`"), std::string::npos);
  }
}

TEST(TagFileTest, StrictIndices) {
  std::istringstream good("0\tja\n1\tzh\n");
  EXPECT_EQ(ReadTagFile(good), (std::vector<std::string>{"ja", "zh"}));
  for (const char* bad : {"1\tja\n", "0\tja\n0\tzh\n", "0ja\n", "0\t\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(ReadTagFile(in), FormatError) << bad;
  }
}

}  // namespace
}  // namespace corpusprep
