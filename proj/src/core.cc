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

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "corpusprep/utf8.h"

namespace corpusprep {

std::size_t CountTokens(std::string_view line) {
  std::size_t n = 0;
  bool in_token = false;
  for (char c : line) {
    const bool space = IsAsciiSpace(c);
    if (!space && !in_token) ++n;
    in_token = !space;
  }
  return n;
}

void SplitTokens(std::string_view line, std::vector<std::string_view>* out) {
  out->clear();
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (i < n) {
    while (i < n && IsAsciiSpace(line[i])) ++i;
    const std::size_t start = i;
    while (i < n && !IsAsciiSpace(line[i])) ++i;
    if (i > start) out->push_back(line.substr(start, i - start));
  }
}

std::vector<std::string_view> SplitTokens(std::string_view line) {
  std::vector<std::string_view> out;
  SplitTokens(line, &out);
  return out;
}

Sentence::Sentence(std::string text) : text_(std::move(text)) {
  if (text_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error("line too long");
  }
  std::vector<std::string_view> toks;
  SplitTokens(text_, &toks);
  spans_.reserve(toks.size());
  for (std::string_view t : toks) {
    spans_.emplace_back(static_cast<std::uint32_t>(t.data() - text_.data()),
                        static_cast<std::uint32_t>(t.size()));
  }
}

std::vector<std::string_view> Sentence::tokens() const {
  std::vector<std::string_view> out;
  out.reserve(spans_.size());
  for (std::size_t i = 0; i < spans_.size(); ++i) out.push_back(token(i));
  return out;
}

std::size_t LineLength(std::string_view line, LengthUnit unit) {
  return unit == LengthUnit::kTokens ? CountTokens(line)
                                     : utf8::CountScalars(line);
}

void LengthDistribution::Add(std::size_t length, std::uint64_t n) {
  if (n == 0) return;
  counts_[length] += n;
  total_ += n;
}

void LengthDistribution::Merge(const LengthDistribution& other) {
  for (const auto& [length, n] : other.counts_) Add(length, n);
}

std::uint64_t LengthDistribution::count(std::size_t length) const {
  const auto it = counts_.find(length);
  return it == counts_.end() ? 0 : it->second;
}

void LengthDistribution::WriteTsv(std::ostream& out) const {
  for (const auto& [length, n] : counts_) out << length << '\t' << n << '\n';
}

namespace {

template <typename T>
bool ParseUnsigned(std::string_view s, T* value) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

LengthDistribution LengthDistribution::ReadTsv(std::istream& in) {
  LengthDistribution dist;
  std::string line;
  std::size_t line_no = 0;
  std::size_t prev = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    std::size_t length;
    std::uint64_t n;
    if (tab == std::string::npos ||
        !ParseUnsigned(std::string_view(line).substr(0, tab), &length) ||
        !ParseUnsigned(std::string_view(line).substr(tab + 1), &n)) {
      throw FormatError("expected `length<TAB>count`", line_no);
    }
    if (dist.total_ > 0 && length <= prev) {
      throw FormatError("lengths must be strictly ascending", line_no);
    }
    prev = length;
    dist.Add(length, n);
  }
  return dist;
}

LengthDistribution ComputeLengthDistribution(std::istream& in,
                                             LengthUnit unit) {
  LengthDistribution dist;
  std::string line;
  while (std::getline(in, line)) dist.Add(LineLength(line, unit));
  return dist;
}

LengthDistribution ComputeLengthDistribution(
    const std::vector<std::string>& lines, LengthUnit unit) {
  LengthDistribution dist;
  for (const auto& line : lines) dist.Add(LineLength(line, unit));
  return dist;
}

CorpusStats Summarize(const LengthDistribution& dist) {
  CorpusStats stats;
  stats.lines = dist.total();
  stats.distinct_lengths = dist.distinct();
  if (dist.total() == 0) return stats;

  stats.min_length = dist.counts().begin()->first;
  stats.max_length = dist.counts().rbegin()->first;

  // Median from the histogram: positions (n-1)/2 and n/2 of the sorted
  // lengths, which coincide for odd n.
  const std::uint64_t lo_rank = (dist.total() - 1) / 2;
  const std::uint64_t hi_rank = dist.total() / 2;
  std::optional<std::size_t> lo, hi;
  std::uint64_t seen = 0;
  double sum = 0;
  for (const auto& [length, n] : dist.counts()) {
    if (!lo && lo_rank < seen + n) lo = length;
    if (!hi && hi_rank < seen + n) hi = length;
    seen += n;
    stats.tokens += static_cast<std::uint64_t>(length) * n;
    sum += static_cast<double>(length) * static_cast<double>(n);
  }
  stats.median_length = (static_cast<double>(*lo) + static_cast<double>(*hi)) / 2;

  const double mean = sum / static_cast<double>(dist.total());
  double sq = 0;
  for (const auto& [length, n] : dist.counts()) {
    const double d = static_cast<double>(length) - mean;
    sq += d * d * static_cast<double>(n);
  }
  stats.mean_length = mean;
  stats.stdev_length = std::sqrt(sq / static_cast<double>(dist.total()));
  return stats;
}

CorpusStats ComputeCorpusStats(std::istream& in, LengthUnit unit) {
  return Summarize(ComputeLengthDistribution(in, unit));
}

nlohmann::json CorpusStats::ToJson() const {
  nlohmann::json j;
  j["lines"] = lines;
  j["tokens"] = tokens;
  j["distinct_lengths"] = distinct_lengths;
  auto opt = [&j](const char* key, const auto& v) {
    if (v) {
      j[key] = *v;
    } else {
      j[key] = nullptr;
    }
  };
  opt("min_length", min_length);
  opt("median_length", median_length);
  opt("max_length", max_length);
  opt("mean_length", mean_length);
  opt("stdev_length", stdev_length);
  return j;
}

std::uint64_t SelectionReport::rejected() const {
  std::uint64_t n = 0;
  for (const auto& [reason, count] : rejections) n += count;
  return n;
}

void SelectionReport::Merge(const SelectionReport& other) {
  lines_read += other.lines_read;
  lines_selected += other.lines_selected;
  lines_written += other.lines_written;
  for (const auto& [k, v] : other.rejections) rejections[k] += v;
  for (const auto& [k, v] : other.counters) counters[k] += v;
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

nlohmann::json SelectionReport::ToJson() const {
  nlohmann::json j;
  j["lines_read"] = lines_read;
  j["lines_selected"] = lines_selected;
  j["lines_written"] = lines_written;
  j["rejections"] = nlohmann::json::object();
  for (const auto& [k, v] : rejections) j["rejections"][k] = v;
  if (seed) {
    j["seed"] = *seed;
  } else {
    j["seed"] = nullptr;
  }
  if (!counters.empty()) j["counters"] = counters;
  if (!warnings.empty()) j["warnings"] = warnings;
  return j;
}

SelectionReport SelectionReport::FromJson(const nlohmann::json& j) {
  SelectionReport r;
  r.lines_read = j.at("lines_read").get<std::uint64_t>();
  r.lines_selected = j.at("lines_selected").get<std::uint64_t>();
  r.lines_written = j.value("lines_written", r.lines_selected);
  r.rejections =
      j.at("rejections").get<std::map<std::string, std::uint64_t>>();
  if (j.contains("seed") && !j["seed"].is_null()) {
    r.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("counters")) {
    r.counters = j["counters"].get<std::map<std::string, std::uint64_t>>();
  }
  if (j.contains("warnings")) {
    r.warnings = j["warnings"].get<std::vector<std::string>>();
  }
  return r;
}

std::vector<std::string> ReadLines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  return lines;
}

std::vector<std::string> ReadLinesFromFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return ReadLines(in);
}

std::uint64_t CountLinesInFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::uint64_t lines = 0;
  bool pending = false;  // bytes after the last LF
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      if (buf[i] == '\n') {
        ++lines;
        pending = false;
      } else {
        pending = true;
      }
    }
  }
  return lines + (pending ? 1 : 0);
}

}  // namespace corpusprep
