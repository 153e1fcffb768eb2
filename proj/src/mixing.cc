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
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

#include "corpusprep/random.h"

namespace corpusprep {

LanguageCorpus ParseCorpusArg(const std::string& arg) {
  const auto colon = arg.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == arg.size()) {
    throw std::invalid_argument("expected tag:path, got `" + arg + "`");
  }
  return {arg.substr(0, colon), arg.substr(colon + 1), 0};
}

std::vector<MixEntry> PlanOversampleMix(const std::vector<std::uint64_t>& sizes,
                                        std::uint64_t seed) {
  if (sizes.empty()) throw Error("nothing to mix");
  const std::uint64_t target = *std::max_element(sizes.begin(), sizes.end());
  std::vector<MixEntry> plan;
  plan.reserve(target * sizes.size());
  std::vector<std::size_t> pool;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    const std::uint64_t size = sizes[c];
    if (size == 0) throw Error("corpus " + std::to_string(c) + " is empty");
    for (std::uint64_t copy = 0; copy < target / size; ++copy) {
      for (std::size_t i = 0; i < size; ++i) plan.push_back({c, i});
    }
    const std::uint64_t remainder = target % size;
    if (remainder == 0) continue;
    pool.resize(size);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::mt19937_64 rng(DeriveSeed(seed, "mix/remainder/" + std::to_string(c)));
    std::vector<std::size_t> sample;
    std::sample(pool.begin(), pool.end(), std::back_inserter(sample), remainder,
                rng);
    for (std::size_t i : sample) plan.push_back({c, i});
  }
  std::mt19937_64 rng(DeriveSeed(seed, "mix/shuffle"));
  std::shuffle(plan.begin(), plan.end(), rng);
  return plan;
}

SelectionReport OversampleMix(std::vector<LanguageCorpus>& corpora,
                              std::uint64_t seed, std::ostream& out,
                              std::ostream& tags_out) {
  if (corpora.empty()) throw Error("mix needs at least one corpus");
  std::vector<std::vector<std::string>> lines;
  std::vector<std::uint64_t> sizes;
  for (auto& corpus : corpora) {
    lines.push_back(ReadLinesFromFile(corpus.path));
    corpus.line_count = lines.back().size();
    if (corpus.line_count == 0) {
      throw Error("corpus `" + corpus.language_tag + "` (" + corpus.path +
                  ") is empty");
    }
    sizes.push_back(corpus.line_count);
  }
  const std::vector<MixEntry> plan = PlanOversampleMix(sizes, seed);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    out << lines[plan[i].corpus][plan[i].line] << '\n';
    tags_out << i << '\t' << corpora[plan[i].corpus].language_tag << '\n';
  }
  SelectionReport report;
  report.seed = seed;
  report.lines_read = std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0});
  // Every input line is used at least once (floor(M / size) >= 1).
  report.lines_selected = report.lines_read;
  report.lines_written = plan.size();
  report.counters["oversampled_lines"] = plan.size() - report.lines_read;
  for (const auto& corpus : corpora) {
    report.counters["lines_" + corpus.language_tag] +=
        *std::max_element(sizes.begin(), sizes.end());
  }
  return report;
}

std::vector<std::string> ReadTagFile(std::istream& in) {
  std::vector<std::string> tags;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab + 1 == line.size()) {
      throw FormatError("expected `line_index<TAB>tag`", line_no);
    }
    if (line.substr(0, tab) != std::to_string(tags.size())) {
      throw FormatError("tag file indices must run 0, 1, 2, ...", line_no);
    }
    tags.push_back(line.substr(tab + 1));
  }
  return tags;
}

std::vector<std::string> LoadTagFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open tag file " + path);
  return ReadTagFile(in);
}

}  // namespace corpusprep
