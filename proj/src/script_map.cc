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

#include "corpusprep/script_map.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "corpusprep/normalize_filter.h"
#include "corpusprep/utf8.h"

namespace corpusprep {
namespace {

// Decodes `s` as exactly one scalar.
std::optional<char32_t> SingleScalar(std::string_view s) {
  std::size_t pos = 0;
  const auto c = utf8::DecodeOne(s, &pos);
  if (!c || pos != s.size()) return std::nullopt;
  return c;
}

bool IsSpaceScalar(char32_t c) {
  return c < 0x80 && IsAsciiSpace(static_cast<char>(c));
}

}  // namespace

void MappingTable::Add(char32_t source, std::vector<char32_t> candidates) {
  if (IsSpaceScalar(source)) {
    throw std::invalid_argument("mapping source must not be whitespace");
  }
  if (candidates.empty()) {
    throw std::invalid_argument("mapping entry has no candidates");
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (IsSpaceScalar(candidates[i])) {
      throw std::invalid_argument("mapping candidate must not be whitespace");
    }
    if (std::find(candidates.begin(), candidates.begin() + i, candidates[i]) !=
        candidates.begin() + i) {
      throw std::invalid_argument("duplicate candidate " +
                                  utf8::Encode(candidates[i]));
    }
  }
  if (!entries_.emplace(source, std::move(candidates)).second) {
    throw std::invalid_argument("duplicate source character " +
                                utf8::Encode(source));
  }
  if (source < 0x80) has_ascii_keys_ = true;
}

const std::vector<char32_t>* MappingTable::Find(char32_t c) const {
  const auto it = entries_.find(c);
  return it == entries_.end() ? nullptr : &it->second;
}

MappingTable MappingTable::Read(std::istream& in) {
  MappingTable table;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> fields;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::string_view view(line);
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos ||
        view.find('\t', tab + 1) != std::string_view::npos) {
      throw FormatError("expected two tab-separated columns", line_no);
    }
    const auto source = SingleScalar(view.substr(0, tab));
    if (!source) {
      throw FormatError("source column must be exactly one character", line_no);
    }
    SplitTokens(view.substr(tab + 1), &fields);
    std::vector<char32_t> candidates;
    for (std::string_view f : fields) {
      const auto c = SingleScalar(f);
      if (!c) {
        throw FormatError("candidate `" + std::string(f) +
                              "` is not exactly one character",
                          line_no);
      }
      candidates.push_back(*c);
    }
    if (table.Find(*source)) {
      throw FormatError(
          "duplicate entry for source character " + utf8::Encode(*source),
          line_no);
    }
    try {
      table.Add(*source, std::move(candidates));
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what(), line_no);
    }
  }
  return table;
}

MappingTable MappingTable::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open mapping table " + path);
  return Read(in);
}

void MappingConfig::Validate() const {
  if (mode == MappingMode::kLmScored && lm == nullptr) {
    throw std::invalid_argument("LM-scored mapping needs a language model");
  }
  if (mode == MappingMode::kOneToOne && lm != nullptr) {
    throw std::invalid_argument("one-to-one mapping takes no language model");
  }
  if (candidate_cap == 0) {
    throw std::invalid_argument("candidate cap must be positive");
  }
}

std::string MapOneToOne(std::string_view text, const MappingTable& table) {
  if (table.empty() || (!table.has_ascii_keys() && utf8::IsAscii(text))) {
    return std::string(text);
  }
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto c = utf8::DecodeOne(text, &pos);
    if (!c) throw std::invalid_argument("MapOneToOne: ill-formed UTF-8");
    const auto* cands = table.Find(*c);
    utf8::AppendScalar(cands ? cands->front() : *c, &out);
  }
  return out;
}

std::size_t CountCombinations(std::string_view token, const MappingTable& table) {
  std::size_t combos = 1;
  for (char32_t c : utf8::Decode(token)) {
    const auto* cands = table.Find(c);
    if (!cands) continue;
    if (combos > std::numeric_limits<std::size_t>::max() / cands->size()) {
      return std::numeric_limits<std::size_t>::max();
    }
    combos *= cands->size();
  }
  return combos;
}

namespace {

// Per-position candidate strings; unmapped scalars are their own only
// candidate.
std::vector<std::vector<std::string>> PositionCandidates(
    std::string_view token, const MappingTable& table) {
  std::vector<std::vector<std::string>> positions;
  for (char32_t c : utf8::Decode(token)) {
    std::vector<std::string> options;
    if (const auto* cands = table.Find(c)) {
      for (char32_t t : *cands) options.push_back(utf8::Encode(t));
    } else {
      options.push_back(utf8::Encode(c));
    }
    positions.push_back(std::move(options));
  }
  return positions;
}

// Odometer over per-position choices with the last position fastest.
bool Advance(const std::vector<std::vector<std::string>>& positions,
             std::vector<std::size_t>* choice) {
  for (std::size_t i = positions.size(); i-- > 0;) {
    if (++(*choice)[i] < positions[i].size()) return true;
    (*choice)[i] = 0;
  }
  return false;
}

}  // namespace

std::vector<std::string> EnumerateCandidates(std::string_view token,
                                             const MappingTable& table) {
  const auto positions = PositionCandidates(token, table);
  std::vector<std::size_t> choice(positions.size(), 0);
  std::vector<std::string> out;
  do {
    std::string s;
    for (std::size_t i = 0; i < positions.size(); ++i) {
      s += positions[i][choice[i]];
    }
    out.push_back(std::move(s));
  } while (Advance(positions, &choice));
  return out;
}

ScriptMapper::ScriptMapper(const MappingTable& table,
                           const MappingConfig& config)
    : table_(table), config_(config) {
  config_.Validate();
}

std::string ScriptMapper::MapToken(std::string_view token,
                                   bool* fell_back) const {
  if (fell_back) *fell_back = false;
  if (config_.mode == MappingMode::kOneToOne) return MapOneToOne(token, table_);

  const std::size_t combos = CountCombinations(token, table_);
  if (combos <= 1) return MapOneToOne(token, table_);
  if (combos > config_.candidate_cap) {
    if (fell_back) *fell_back = true;
    return MapOneToOne(token, table_);
  }

  const auto positions = PositionCandidates(token, table_);
  std::vector<std::size_t> choice(positions.size(), 0);
  std::vector<std::size_t> best_choice = choice;
  std::vector<std::string_view> units(positions.size());
  double best = -std::numeric_limits<double>::infinity();
  do {
    for (std::size_t i = 0; i < positions.size(); ++i) {
      units[i] = positions[i][choice[i]];
    }
    const double score = config_.lm->ScoreUnits(units).total_log10;
    if (score > best) {  // strict: ties keep the earlier combination
      best = score;
      best_choice = choice;
    }
  } while (Advance(positions, &choice));

  std::string out;
  out.reserve(token.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    out += positions[i][best_choice[i]];
  }
  return out;
}

std::string ScriptMapper::MapLine(std::string_view line,
                                  SelectionReport* report) const {
  if (config_.mode == MappingMode::kOneToOne) return MapOneToOne(line, table_);
  std::string out;
  out.reserve(line.size());
  std::size_t i = 0;
  while (i < line.size()) {
    if (IsAsciiSpace(line[i])) {
      out.push_back(line[i++]);
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !IsAsciiSpace(line[i])) ++i;
    bool fell_back = false;
    out += MapToken(line.substr(start, i - start), &fell_back);
    if (fell_back && report) ++report->counters[kCapFallbackCounter];
  }
  return out;
}

SelectionReport RunScriptMapping(std::istream& in, std::ostream& out,
                                 const MappingTable& table,
                                 const MappingConfig& config) {
  const ScriptMapper mapper(table, config);
  SelectionReport report;
  std::string line;
  while (std::getline(in, line)) {
    if (!utf8::IsValid(line)) {
      report.Reject(reason::kInvalidUtf8);
      continue;
    }
    out << mapper.MapLine(line, &report) << '\n';
    report.Select();
  }
  return report;
}

}  // namespace corpusprep
