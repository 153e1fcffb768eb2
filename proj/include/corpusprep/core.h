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

// Shared data model: sentences as whitespace-tokenized lines, length
// histograms, corpus summaries and per-run accounting.

#ifndef CORPUSPREP_CORE_H_
#define CORPUSPREP_CORE_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace corpusprep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A malformed input file. `line` is 1-based; 0 when not line-specific.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

inline bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' ||
         c == '\r';
}

std::size_t CountTokens(std::string_view line);
void SplitTokens(std::string_view line, std::vector<std::string_view>* out);
std::vector<std::string_view> SplitTokens(std::string_view line);

// One line of text with a token view. Token boundaries are stored as byte
// offsets so copies stay valid.
class Sentence {
 public:
  Sentence() = default;
  explicit Sentence(std::string text);

  const std::string& text() const { return text_; }
  std::size_t length() const { return spans_.size(); }
  bool empty() const { return spans_.empty(); }
  std::string_view token(std::size_t i) const {
    return std::string_view(text_).substr(spans_[i].first, spans_[i].second);
  }
  std::vector<std::string_view> tokens() const;

 private:
  std::string text_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> spans_;
};

enum class LengthUnit { kTokens, kCharacters };

// Tokens: whitespace-delimited tokens. Characters: Unicode scalars in the
// line (the line must be valid UTF-8).
std::size_t LineLength(std::string_view line, LengthUnit unit);

// Histogram length -> number of lines.
class LengthDistribution {
 public:
  void Add(std::size_t length, std::uint64_t n = 1);
  void Merge(const LengthDistribution& other);

  std::uint64_t count(std::size_t length) const;
  std::uint64_t total() const { return total_; }
  std::size_t distinct() const { return counts_.size(); }
  const std::map<std::size_t, std::uint64_t>& counts() const {
    return counts_;
  }

  // `length<TAB>count`, ascending by length, no header.
  void WriteTsv(std::ostream& out) const;
  static LengthDistribution ReadTsv(std::istream& in);

  friend bool operator==(const LengthDistribution&,
                         const LengthDistribution&) = default;

 private:
  std::map<std::size_t, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

LengthDistribution ComputeLengthDistribution(
    std::istream& in, LengthUnit unit = LengthUnit::kTokens);
LengthDistribution ComputeLengthDistribution(
    const std::vector<std::string>& lines,
    LengthUnit unit = LengthUnit::kTokens);

struct CorpusStats {
  std::uint64_t lines = 0;
  std::uint64_t tokens = 0;  // sum of lengths in the chosen unit
  std::optional<std::size_t> min_length;
  std::optional<double> median_length;
  std::optional<std::size_t> max_length;
  std::optional<double> mean_length;
  std::optional<double> stdev_length;  // population
  std::size_t distinct_lengths = 0;

  nlohmann::json ToJson() const;
};

CorpusStats Summarize(const LengthDistribution& dist);
CorpusStats ComputeCorpusStats(std::istream& in,
                               LengthUnit unit = LengthUnit::kTokens);

// Accounting for one stage run. Every line read is either selected or
// rejected under exactly one reason tag. `lines_written` counts emitted
// lines, which differs from `lines_selected` only where a stage duplicates
// lines (oversampling).
struct SelectionReport {
  std::uint64_t lines_read = 0;
  std::uint64_t lines_selected = 0;
  std::uint64_t lines_written = 0;
  std::map<std::string, std::uint64_t> rejections;
  std::optional<std::uint64_t> seed;
  // Events that do not affect line accounting, e.g. mapping fallbacks.
  std::map<std::string, std::uint64_t> counters;
  std::vector<std::string> warnings;

  void Select() {
    ++lines_read;
    ++lines_selected;
    ++lines_written;
  }
  void Reject(const std::string& reason) {
    ++lines_read;
    ++rejections[reason];
  }
  std::uint64_t rejected() const;
  bool Conserved() const { return lines_read == lines_selected + rejected(); }

  void Merge(const SelectionReport& other);
  nlohmann::json ToJson() const;
  static SelectionReport FromJson(const nlohmann::json& j);
};

// Line I/O. Lines are LF-terminated; a final line without LF still counts.
std::vector<std::string> ReadLines(std::istream& in);
std::vector<std::string> ReadLinesFromFile(const std::string& path);
std::uint64_t CountLinesInFile(const std::string& path);

}  // namespace corpusprep

#endif  // CORPUSPREP_CORE_H_
