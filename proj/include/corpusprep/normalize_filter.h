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

// NFKC normalization and the initial corpus filters: a token-count window
// and, for noisy Chinese data, a Han/ASCII token ratio check.

#ifndef CORPUSPREP_NORMALIZE_FILTER_H_
#define CORPUSPREP_NORMALIZE_FILTER_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>

#include "corpusprep/core.h"

namespace corpusprep {

// Reason tags recorded in SelectionReport::rejections.
namespace reason {
inline constexpr char kInvalidUtf8[] = "invalid_utf8";
inline constexpr char kEmpty[] = "empty";
inline constexpr char kTooShort[] = "too_short";
inline constexpr char kTooLong[] = "too_long";
inline constexpr char kLowCjkRatio[] = "low_cjk_ratio";
inline constexpr char kHighAsciiRatio[] = "high_ascii_ratio";
}  // namespace reason

// Returns the NFKC form of `line`. Throws std::invalid_argument if `line` is
// not valid UTF-8. ASCII input is returned unchanged without a trip through
// ICU.
std::string NfkcNormalize(std::string_view line);

struct FilterRule {
  std::size_t min_tokens = 3;   // inclusive
  std::size_t max_tokens = 80;  // exclusive
  double cjk_min_ratio = 0.30;
  double ascii_max_ratio = 0.30;
  bool cjk_filter_enabled = false;

  // Throws std::invalid_argument when 0 < min < max or the ratio ranges do
  // not hold.
  void Validate() const;
};

enum class TokenClass { kChinese, kEnglish, kOther };

// Chinese: contains a scalar in U+4E00..U+9FFF or U+3400..U+4DBF.
// English: every byte is an ASCII letter. The token must be valid UTF-8.
TokenClass ClassifyToken(std::string_view token);

// Keep/reject decision. `reason` is null when the line is kept.
struct FilterDecision {
  bool keep = true;
  const char* reason = nullptr;

  static FilterDecision Keep() { return {}; }
  static FilterDecision Reject(const char* why) { return {false, why}; }
};

FilterDecision TokenLengthFilter(std::size_t length, const FilterRule& rule);
FilterDecision TokenLengthFilter(const Sentence& sentence,
                                 const FilterRule& rule);

// Rejects when the Chinese token fraction is strictly below cjk_min_ratio or
// the English token fraction is strictly above ascii_max_ratio.
FilterDecision CjkRatioFilter(const Sentence& sentence, const FilterRule& rule);

// Line-at-a-time filter. Holds scratch buffers, so one instance per thread.
class LineFilter {
 public:
  explicit LineFilter(const FilterRule& rule);
  FilterDecision Decide(std::string_view line);

 private:
  FilterRule rule_;
  std::vector<std::string_view> tokens_;
};

// Streams `in` to `out`, keeping lines that pass `rule` unmodified and in
// order. Never aborts on bad lines; every line lands in the report.
SelectionReport RunFilterPipeline(std::istream& in, std::ostream& out,
                                  const FilterRule& rule);

// Streams `in` to `out` through NFKC. Ill-formed UTF-8 lines are dropped
// with reason `invalid_utf8`.
SelectionReport RunNormalizePipeline(std::istream& in, std::ostream& out);

}  // namespace corpusprep

#endif  // CORPUSPREP_NORMALIZE_FILTER_H_
