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

#include "corpusprep/selection.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

namespace corpusprep {

SelectionMethod ParseSelectionMethod(std::string_view name) {
  if (name == "random") return SelectionMethod::kRandom;
  if (name == "lm") return SelectionMethod::kLmTopN;
  if (name == "ld") return SelectionMethod::kLengthDistribution;
  if (name == "lm-ld") return SelectionMethod::kLmThenLd;
  throw std::invalid_argument("unknown selection method `" + std::string(name) +
                              "` (expected random, lm, ld or lm-ld)");
}

const char* SelectionMethodName(SelectionMethod method) {
  switch (method) {
    case SelectionMethod::kRandom: return "random";
    case SelectionMethod::kLmTopN: return "lm";
    case SelectionMethod::kLengthDistribution: return "ld";
    case SelectionMethod::kLmThenLd: return "lm-ld";
  }
  return "?";
}

void SelectionSpec::Validate() const {
  if (select_num == 0) {
    throw std::invalid_argument("select_num must be at least 1");
  }
  const bool random = method == SelectionMethod::kRandom;
  const bool uses_target = method == SelectionMethod::kLengthDistribution ||
                           method == SelectionMethod::kLmThenLd;
  const bool uses_scores = method == SelectionMethod::kLmTopN ||
                           method == SelectionMethod::kLmThenLd;
  const std::string name = SelectionMethodName(method);
  if (seed.has_value() != random) {
    throw std::invalid_argument(random ? "random selection needs a seed"
                                       : name + " selection takes no seed");
  }
  if (target.has_value() != uses_target) {
    throw std::invalid_argument(uses_target
                                    ? name + " selection needs a target distribution"
                                    : name + " selection takes no target distribution");
  }
  if (uses_target && target->total() == 0) {
    throw std::invalid_argument("target distribution is empty");
  }
  if (score_file.has_value() != uses_scores) {
    throw std::invalid_argument(uses_scores
                                    ? name + " selection needs a score file"
                                    : name + " selection takes no score file");
  }
}

// ---------------------------------------------------------------------------
// Random

namespace {

// Algorithm R over a stream of items; slot j holds (index, item).
template <typename Item>
class Reservoir {
 public:
  Reservoir(std::uint64_t capacity, std::uint64_t seed)
      : capacity_(capacity), rng_(seed) {}

  void Offer(std::size_t index, Item item) {
    if (slots_.size() < capacity_) {
      slots_.emplace_back(index, std::move(item));
      return;
    }
    std::uniform_int_distribution<std::uint64_t> pick(0, index);
    const std::uint64_t j = pick(rng_);
    if (j < capacity_) slots_[j] = {index, std::move(item)};
  }

  std::vector<std::pair<std::size_t, Item>> TakeInIndexOrder() {
    std::sort(slots_.begin(), slots_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return std::move(slots_);
  }

 private:
  std::uint64_t capacity_;
  std::mt19937_64 rng_;
  std::vector<std::pair<std::size_t, Item>> slots_;
};

}  // namespace

std::vector<std::size_t> SampleIndices(std::size_t size, std::uint64_t n,
                                       std::uint64_t seed) {
  Reservoir<char> reservoir(n, seed);
  for (std::size_t i = 0; i < size; ++i) reservoir.Offer(i, 0);
  std::vector<std::size_t> out;
  for (const auto& slot : reservoir.TakeInIndexOrder()) out.push_back(slot.first);
  return out;
}

SelectionReport SelectRandom(std::istream& in, std::ostream& out,
                             std::uint64_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("select_num must be at least 1");
  Reservoir<std::string> reservoir(n, seed);
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) reservoir.Offer(count++, std::move(line));
  SelectionReport report;
  report.seed = seed;
  const auto chosen = reservoir.TakeInIndexOrder();
  for (const auto& [index, text] : chosen) out << text << '\n';
  report.lines_read = count;
  report.lines_selected = report.lines_written = chosen.size();
  if (count > chosen.size()) {
    report.rejections[reason::kNotSampled] = count - chosen.size();
  }
  return report;
}

// ---------------------------------------------------------------------------
// LM score

std::vector<std::size_t> TopNByScore(std::span<const double> scores,
                                     std::uint64_t n) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto better = [&scores](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  if (n < order.size()) {
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n),
                      order.end(), better);
    order.resize(n);
  } else {
    std::sort(order.begin(), order.end(), better);
  }
  return order;
}

std::vector<ScoredLine> ReadScoreFile(std::istream& in) {
  std::vector<ScoredLine> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("expected `score<TAB>line`", line_no);
    }
    double score = 0;
    const auto [ptr, ec] =
        std::from_chars(line.data(), line.data() + tab, score);
    if (ec != std::errc() || ptr != line.data() + tab || std::isnan(score)) {
      throw FormatError("bad score `" + line.substr(0, tab) + "`", line_no);
    }
    rows.push_back({score, line.substr(tab + 1)});
  }
  return rows;
}

std::vector<ScoredLine> LoadScoreFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open score file " + path);
  return ReadScoreFile(in);
}

std::vector<double> AlignScores(const std::vector<std::string>& lines,
                                const std::vector<ScoredLine>& scored) {
  if (lines.size() != scored.size()) {
    throw Error("score file has " + std::to_string(scored.size()) +
                " rows but the corpus has " + std::to_string(lines.size()) +
                " lines");
  }
  std::vector<double> scores;
  scores.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (scored[i].line != lines[i]) {
      throw Error("score file row " + std::to_string(i + 1) +
                  " does not match corpus line " + std::to_string(i + 1));
    }
    scores.push_back(scored[i].score);
  }
  return scores;
}

SelectionReport SelectLmTopN(const std::vector<std::string>& lines,
                             std::span<const double> scores, std::uint64_t n,
                             std::ostream& out, bool keep_file_order) {
  if (n == 0) throw std::invalid_argument("select_num must be at least 1");
  if (lines.size() != scores.size()) {
    throw Error("got " + std::to_string(scores.size()) + " scores for " +
                std::to_string(lines.size()) + " lines");
  }
  std::vector<std::size_t> chosen = TopNByScore(scores, n);
  if (keep_file_order) std::sort(chosen.begin(), chosen.end());
  for (std::size_t i : chosen) out << lines[i] << '\n';
  SelectionReport report;
  report.lines_read = lines.size();
  report.lines_selected = report.lines_written = chosen.size();
  if (lines.size() > chosen.size()) {
    report.rejections[reason::kBelowTopN] = lines.size() - chosen.size();
  }
  return report;
}

// ---------------------------------------------------------------------------
// Length distribution

LengthDistributionSelector::LengthDistributionSelector(
    const LengthDistribution& target, std::uint64_t select_num)
    : target_(target), select_num_(select_num) {
  if (target.total() == 0) {
    throw std::invalid_argument("target distribution is empty");
  }
  if (select_num == 0) {
    throw std::invalid_argument("select_num must be at least 1");
  }
}

LengthDistributionSelector::Decision LengthDistributionSelector::Offer(
    std::size_t length) {
  const std::uint64_t want = target_.count(length);
  if (want == 0) return Decision::kLengthAbsent;
  using Wide = unsigned __int128;
  // current/select_num < want/total  <=>  current*total < want*select_num
  if (static_cast<Wide>(current_.count(length)) * target_.total() <
      static_cast<Wide>(want) * select_num_) {
    current_.Add(length);
    return Decision::kSelected;
  }
  return Decision::kQuotaFull;
}

namespace {

void Account(LengthDistributionSelector::Decision d, SelectionReport* report) {
  switch (d) {
    case LengthDistributionSelector::Decision::kSelected:
      report->Select();
      break;
    case LengthDistributionSelector::Decision::kLengthAbsent:
      report->Reject(reason::kLengthAbsent);
      break;
    case LengthDistributionSelector::Decision::kQuotaFull:
      report->Reject(reason::kLengthQuotaFull);
      break;
  }
}

void WarnIfUnderfilled(const LengthDistributionSelector& selector,
                       SelectionReport* report) {
  if (selector.selected() < selector.select_num()) {
    report->warnings.push_back(
        "length-distribution selection under-filled: selected " +
        std::to_string(selector.selected()) + " of " +
        std::to_string(selector.select_num()) + " (shortfall " +
        std::to_string(selector.select_num() - selector.selected()) + ")");
  }
}

}  // namespace

std::vector<std::size_t> SelectByLengthDistribution(
    std::span<const std::size_t> lengths, const LengthDistribution& target,
    std::uint64_t select_num, SelectionReport* report) {
  LengthDistributionSelector selector(target, select_num);
  std::vector<std::size_t> chosen;
  SelectionReport local;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const auto d = selector.Offer(lengths[i]);
    if (d == LengthDistributionSelector::Decision::kSelected) chosen.push_back(i);
    Account(d, &local);
  }
  WarnIfUnderfilled(selector, &local);
  if (report) *report = std::move(local);
  return chosen;
}

SelectionReport SelectLengthDistribution(std::istream& in, std::ostream& out,
                                         const LengthDistribution& target,
                                         std::uint64_t select_num,
                                         LengthUnit unit) {
  LengthDistributionSelector selector(target, select_num);
  SelectionReport report;
  std::string line;
  while (std::getline(in, line)) {
    const auto d = selector.Offer(LineLength(line, unit));
    if (d == LengthDistributionSelector::Decision::kSelected) out << line << '\n';
    Account(d, &report);
  }
  WarnIfUnderfilled(selector, &report);
  return report;
}

std::vector<std::size_t> SelectLmThenLdIndices(
    std::span<const std::size_t> lengths, std::span<const double> scores,
    const LengthDistribution& target, std::uint64_t select_num,
    SelectionReport* report) {
  if (lengths.size() != scores.size()) {
    throw Error("got " + std::to_string(scores.size()) + " scores for " +
                std::to_string(lengths.size()) + " lines");
  }
  const std::vector<std::size_t> order = TopNByScore(scores, scores.size());
  std::vector<std::size_t> sorted_lengths;
  sorted_lengths.reserve(order.size());
  for (std::size_t i : order) sorted_lengths.push_back(lengths[i]);
  std::vector<std::size_t> chosen =
      SelectByLengthDistribution(sorted_lengths, target, select_num, report);
  for (std::size_t& c : chosen) c = order[c];
  return chosen;
}

SelectionReport SelectLmThenLd(const std::vector<std::string>& lines,
                               std::span<const double> scores,
                               const LengthDistribution& target,
                               std::uint64_t select_num, std::ostream& out,
                               LengthUnit unit) {
  std::vector<std::size_t> lengths;
  lengths.reserve(lines.size());
  for (const auto& line : lines) lengths.push_back(LineLength(line, unit));
  SelectionReport report;
  for (std::size_t i :
       SelectLmThenLdIndices(lengths, scores, target, select_num, &report)) {
    out << lines[i] << '\n';
  }
  return report;
}

}  // namespace corpusprep
