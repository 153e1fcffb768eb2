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


// Drives the command-line tool end to end through the shell.

#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include "corpusprep/core.h"
#include "corpusprep/mass_gen.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace corpusprep {
namespace {

class CliTest : public ::testing::Test {
 protected:
  // Runs the tool with `args` inside the temp dir; returns the exit code.
  int Run(const std::string& args) {
    const std::string cmd = "cd '" + dir_.path().string() + "' && '" CORPUSPREP_CLI "' " +
                            args + " 2>stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string Read(const std::string& name) { return testing::ReadFile(dir_.File(name)); }
  void Write(const std::string& name, const std::string& text) {
    testing::WriteFile(dir_.File(name), text);
  }
  nlohmann::json Json(const std::string& name) { return nlohmann::json::parse(Read(name)); }

  testing::TempDir dir_;
};

TEST_F(CliTest, NormalizeThenFilterWithReports) {
  Write("in.txt", "Ａ Ｂ Ｃ\nx y\n\xff bad line here\na b c d\n");
  ASSERT_EQ(Run("normalize --report n.json < in.txt > n.txt"), 0);
  EXPECT_EQ(Read("n.txt"), "A B C\nx y\na b c d\n");
  EXPECT_EQ(Json("n.json")["rejections"]["invalid_utf8"], 1);
  ASSERT_EQ(Run("filter --min-tokens 3 --max-tokens 80 --report f.json < n.txt > f.txt"), 0);
  EXPECT_EQ(Read("f.txt"), "A B C\na b c d\n");
  const auto report = Json("f.json");
  EXPECT_EQ(report["lines_read"], 3);
  EXPECT_EQ(report["lines_selected"], 2);
  EXPECT_EQ(report["rejections"]["too_short"], 1);
}

TEST_F(CliTest, RatioFilterIsEnabledByRatioFlags) {
  Write("zh.txt", "中 文 字 ok\nen en en 中\n");
  // Line 1: C = 0.75, E = 0.25. Line 2: C = 0.25, E = 0.75.
  ASSERT_EQ(Run("filter < zh.txt > out.txt"), 0);
  EXPECT_EQ(Read("out.txt"), "中 文 字 ok\nen en en 中\n");
  ASSERT_EQ(Run("filter --cjk-ratio 0.3 --ascii-ratio 0.3 < zh.txt > out.txt"), 0);
  EXPECT_EQ(Read("out.txt"), "中 文 字 ok\n");
  ASSERT_EQ(Run("filter --cjk-filter --ascii-ratio 0.2 < zh.txt > out.txt"), 0);
  EXPECT_EQ(Read("out.txt"), "");
}

TEST_F(CliTest, LmTrainScoreAndSelect) {
  Write("train.txt", "a b c\na b\nb c a\n");
  ASSERT_EQ(Run("lm-train --order 3 -o m.arpa < train.txt"), 0);
  EXPECT_EQ(Read("m.arpa").rfind("\\data\\", 0), 0u);
  Write("cand.txt", "a b c\nz z z\nb c\n");
  ASSERT_EQ(Run("lm-score --lm m.arpa < cand.txt > s.tsv"), 0);
  const auto rows = ReadLinesFromFile(dir_.File("s.tsv"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NE(rows[1].find("\tz z z"), std::string::npos);
  ASSERT_EQ(Run("select --method lm --n 2 --scores s.tsv < cand.txt > top.txt"), 0);
  EXPECT_EQ(ReadLinesFromFile(dir_.File("top.txt")).size(), 2u);
  EXPECT_EQ(Read("top.txt").find("z z z"), std::string::npos);
  // Scores computed for a different file are refused.
  Write("other.txt", "q\n");
  EXPECT_EQ(Run("select --method lm --n 1 --scores s.tsv < other.txt > x.txt"), 1);
  EXPECT_NE(Read("stderr.txt").find("3"), std::string::npos);
}

TEST_F(CliTest, MleDiagnosticUnigrams) {
  Write("c.txt", "a a b\n");
  ASSERT_EQ(Run("lm-train --order 1 --mle-diagnostic -o u.arpa < c.txt"), 0);
  EXPECT_NE(Read("u.arpa").find("-0.30103\ta"), std::string::npos);
}

TEST_F(CliTest, LengthSelectionAndStats) {
  Write("dev.txt", "a b\na b\na b c d\n");
  Write("in.txt", "x y\np q r s\nt u v w\nk l\nm n\n");
  ASSERT_EQ(Run("select --method ld --n 3 --target-file dev.txt --report r.json < in.txt > o.txt"), 0);
  EXPECT_EQ(Read("o.txt"), "x y\np q r s\nk l\n");
  EXPECT_EQ(Json("r.json")["rejections"]["length_quota_full"], 2);
  ASSERT_EQ(Run("stats --dist d.tsv < dev.txt > st.json"), 0);
  EXPECT_EQ(Read("d.tsv"), "2\t2\n4\t1\n");
  EXPECT_EQ(Json("st.json")["median_length"], 2.0);
  ASSERT_EQ(Run("select --method ld --n 3 --target-dist d.tsv < in.txt > o2.txt"), 0);
  EXPECT_EQ(Read("o2.txt"), Read("o.txt"));
}

TEST_F(CliTest, RandomSelectionIsSeeded) {
  std::string text;
  for (int i = 0; i < 50; ++i) text += "line " + std::to_string(i) + "\n";
  Write("in.txt", text);
  ASSERT_EQ(Run("select --method random --n 10 --seed 3 < in.txt > a.txt"), 0);
  ASSERT_EQ(Run("select --method random --n 10 --seed 3 < in.txt > b.txt"), 0);
  EXPECT_EQ(Read("a.txt"), Read("b.txt"));
  EXPECT_EQ(ReadLinesFromFile(dir_.File("a.txt")).size(), 10u);
  EXPECT_EQ(Run("select --method random --n 0 --seed 3 < in.txt > c.txt"), 1);
}

TEST_F(CliTest, MapScript) {
  Write("t.tsv", "X\tx y\n");
  Write("in.txt", "XQ X\n");
  ASSERT_EQ(Run("map-script --table t.tsv --mode one-to-one < in.txt > o.txt"), 0);
  EXPECT_EQ(Read("o.txt"), "xQ x\n");
  EXPECT_NE(Run("map-script --table t.tsv --mode lm-scored < in.txt > o.txt"), 0);
  Write("bad.tsv", "X\tx\nX\ty\n");
  EXPECT_EQ(Run("map-script --table bad.tsv < in.txt > o.txt"), 1);
  EXPECT_NE(Read("stderr.txt").find("line 2"), std::string::npos);
}

TEST_F(CliTest, MixThenMassGen) {
  Write("ja.txt", "ja a b\nja c d\n");
  Write("zh.txt", "zh 1 2 3\nzh 4\nzh 5 6\nzh 7 8 9 10\nzh x\n");
  ASSERT_EQ(Run("mix --seed 9 ja:ja.txt zh:zh.txt -o mixed.txt --tags tags.tsv"), 0);
  const auto mixed = ReadLinesFromFile(dir_.File("mixed.txt"));
  EXPECT_EQ(mixed.size(), 10u);
  ASSERT_EQ(Run("mass-gen --tags tags.tsv --seed 4 < mixed.txt > mass.tsv"), 0);
  const auto rows = ReadLinesFromFile(dir_.File("mass.tsv"));
  ASSERT_EQ(rows.size(), 10u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto ex = ParseMassExample(rows[i]);
    EXPECT_EQ(ex.language_tag, mixed[i].substr(0, 2));
    EXPECT_TRUE(VerifyExample(ex, Sentence(mixed[i])));
  }
  Write("empty.txt", "");
  EXPECT_EQ(Run("mix --seed 1 ja:ja.txt en:empty.txt -o m.txt --tags t.tsv"), 1);
  EXPECT_NE(Read("stderr.txt").find("en"), std::string::npos);
}

TEST_F(CliTest, ValidateAndRun) {
  EXPECT_EQ(Run("validate '" CORPUSPREP_SOURCE_DIR "/recipes/paper.recipe'"), 0);
  Write("bad.recipe", "[inputs]\na = a.txt\n[filter]\ninput = a\noutput = f\n");
  EXPECT_EQ(Run("validate bad.recipe"), 1);
  EXPECT_NE(Read("stderr.txt").find("filter requires normalized input"), std::string::npos);
  Write("empty.recipe", "seed = 1\n");
  EXPECT_EQ(Run("run empty.recipe --work-dir w"), 1);
  EXPECT_NE(Read("stderr.txt").find("no stages"), std::string::npos);

  Write("a.txt", "Ａ b c\nd e\nf g h i\n");
  Write("ok.recipe",
        "seed = 5\n[inputs]\na = a.txt\n[normalize]\ninput = a\noutput = n\n"
        "[filter]\ninput = n\noutput = f\n");
  ASSERT_EQ(Run("run ok.recipe --data-dir . --work-dir w"), 0);
  EXPECT_EQ(Read("w/f"), "A b c\nf g h i\n");
  const auto manifest = Json("w/manifest.json");
  EXPECT_TRUE(manifest["ok"].get<bool>());
  EXPECT_EQ(manifest["stages"].size(), 2u);
  EXPECT_TRUE(manifest["stages"][1]["conservation_ok"].get<bool>());
}

TEST_F(CliTest, UsageErrorsExitNonZero) {
  EXPECT_NE(Run("no-such-command"), 0);
  EXPECT_NE(Run("filter --min-tokens 5 --max-tokens 2 < /dev/null"), 0);
  EXPECT_NE(Run("lm-score --lm missing.arpa < /dev/null"), 0);
}

}  // namespace
}  // namespace corpusprep
