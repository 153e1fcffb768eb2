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

// Data selection: seeded random sampling, top-N by language-model score,
// single-pass length-distribution matching, and score-sorted
// length-distribution matching.

#ifndef CORPUSPREP_SELECTION_H_
#define CORPUSPREP_SELECTION_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corpusprep/core.h"

namespace corpusprep {

namespace reason {
inline constexpr char kNotSampled[] = "not_sampled";
inline constexpr char kBelowTopN[] = "below_top_n";
inline constexpr char kLengthAbsent[] = "length_absent";
inline constexpr char kLengthQuotaFull[] = "length_quota_full";
}  // namespace reason

enum class SelectionMethod { kRandom, kLmTopN, kLengthDistribution, kLmThenLd };

// Parses "random", "lm", "ld", "lm-ld". Throws std::invalid_argument.
SelectionMethod ParseSelectionMethod(std::string_view name);
const char* SelectionMethodName(SelectionMethod method);

struct SelectionSpec {
  SelectionMethod method = SelectionMethod::kRandom;
  std::uint64_t select_num = 0;
  std::optional<std::uint64_t> seed;                 // random only
  std::optional<LengthDistribution> target;          // ld, lm-ld
  std::optional<std::string> score_file;             // lm, lm-ld

  // Throws std::invalid_argument unless select_num >= 1 and exactly the
  // fields the method needs are present.
  void Validate() const;
};

// Indices of a uniform sample without replacement of min(n, size) out of
// `size` lines, ascending.
std::vector<std::size_t> SampleIndices(std::size_t size, std::uint64_t n,
                                       std::uint64_t seed);

// Reservoir-samples the stream; selected lines come out in input order.
SelectionReport SelectRandom(std::istream& in, std::ostream& out,
                             std::uint64_t n, std::uint64_t seed);

// Indices of the n highest scores in descending score order; equal scores
// keep the lower index first.
std::vector<std::size_t> TopNByScore(std::span<const double> scores,
                                     std::uint64_t n);

// One line of `lm-score` output.
struct ScoredLine {
  double score;
  std::string line;
};

// Reads `score<TAB>line` rows. Throws FormatError on bad rows or NaN.
std::vector<ScoredLine> ReadScoreFile(std::istream& in);
std::vector<ScoredLine> LoadScoreFile(const std::string& path);

// Scores aligned with `lines`. Throws Error naming both lengths on a count
// mismatch, or the first line whose text differs.
std::vector<double> AlignScores(const std::vector<std::string>& lines,
                                const std::vector<ScoredLine>& scored);

// Writes the selected lines in descending score order, or in file order
// when `keep_file_order` is set.
SelectionReport SelectLmTopN(const std::vector<std::string>& lines,
                             std::span<const double> scores, std::uint64_t n,
                             std::ostream& out, bool keep_file_order = false);

// Single-pass admission against a target length histogram. A line of length
// L is taken iff current[L] / select_num < target[L] / target.total(),
// compared exactly by cross-multiplication.
class LengthDistributionSelector {
 public:
  enum class Decision { kSelected, kLengthAbsent, kQuotaFull };

  // Throws std::invalid_argument when target is empty or select_num == 0.
  LengthDistributionSelector(const LengthDistribution& target,
                             std::uint64_t select_num);

  Decision Offer(std::size_t length);

  const LengthDistribution& current() const { return current_; }
  std::uint64_t selected() const { return current_.total(); }
  std::uint64_t select_num() const { return select_num_; }

 private:
  LengthDistribution target_;
  std::uint64_t select_num_;
  LengthDistribution current_;
};

// Selected indices in admission order; fills `report` when given.
std::vector<std::size_t> SelectByLengthDistribution(
    std::span<const std::size_t> lengths, const LengthDistribution& target,
    std::uint64_t select_num, SelectionReport* report = nullptr);

// Streaming form. An under-filled run adds a warning with the shortfall.
SelectionReport SelectLengthDistribution(std::istream& in, std::ostream& out,
                                         const LengthDistribution& target,
                                         std::uint64_t select_num,
                                         LengthUnit unit = LengthUnit::kTokens);

// Sorts by descending score (ties by index), then runs the length
// distribution pass over the sorted order. Returns indices in output order.
std::vector<std::size_t> SelectLmThenLdIndices(
    std::span<const std::size_t> lengths, std::span<const double> scores,
    const LengthDistribution& target, std::uint64_t select_num,
    SelectionReport* report = nullptr);

SelectionReport SelectLmThenLd(const std::vector<std::string>& lines,
                               std::span<const double> scores,
                               const LengthDistribution& target,
                               std::uint64_t select_num, std::ostream& out,
                               LengthUnit unit = LengthUnit::kTokens);

}  // namespace corpusprep

#endif  // CORPUSPREP_SELECTION_H_
