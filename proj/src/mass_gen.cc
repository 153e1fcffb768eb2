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

#include "corpusprep/mass_gen.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

#include "corpusprep/normalize_filter.h"
#include "corpusprep/random.h"

namespace corpusprep {

void MaskConfig::Validate() const {
  if (!(mask_fraction > 0.0 && mask_fraction <= 1.0)) {
    throw std::invalid_argument("mask fraction must lie in (0, 1]");
  }
  if (mask_token.empty() || CountTokens(mask_token) != 1 ||
      mask_token.find_first_of(" \t\n\v\f\r") != std::string::npos) {
    throw std::invalid_argument("mask token must be one whitespace-free token");
  }
}

std::size_t MaskSpanLength(std::size_t length, double fraction) {
  const auto rounded = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(length)));
  return std::min(length, std::max<std::size_t>(1, rounded));
}

MassExample MakeMassExample(const Sentence& sentence, std::uint64_t line_index,
                            const MaskConfig& config, std::string language_tag) {
  const std::size_t m = sentence.length();
  if (m == 0) throw std::invalid_argument("cannot mask an empty sentence");
  MassExample ex;
  ex.language_tag = std::move(language_tag);
  ex.span_len = MaskSpanLength(m, config.mask_fraction);
  SplitMix64 rng(DeriveSeed(config.seed, line_index));
  std::uniform_int_distribution<std::size_t> start(0, m - ex.span_len);
  ex.span_start = start(rng);
  ex.encoder_input.reserve(m);
  ex.decoder_target.reserve(ex.span_len);
  for (std::size_t i = 0; i < m; ++i) {
    if (i >= ex.span_start && i < ex.span_start + ex.span_len) {
      ex.encoder_input.push_back(config.mask_token);
      ex.decoder_target.emplace_back(sentence.token(i));
    } else {
      ex.encoder_input.emplace_back(sentence.token(i));
    }
  }
  return ex;
}

bool VerifyExample(const MassExample& example, const Sentence& original,
                   std::string_view mask_token) {
  const std::size_t m = original.length();
  const std::size_t start = example.span_start;
  const std::size_t len = example.span_len;
  if (example.encoder_input.size() != m) return false;
  if (example.decoder_target.size() != len || len == 0) return false;
  if (start > m || len > m - start) return false;
  for (std::size_t i = 0; i < m; ++i) {
    const bool masked = i >= start && i < start + len;
    const std::string& enc = example.encoder_input[i];
    if (masked) {
      if (enc != mask_token) return false;
      if (example.decoder_target[i - start] != original.token(i)) return false;
    } else if (enc != original.token(i)) {
      return false;
    }
  }
  return true;
}

namespace {

void AppendJoined(const std::vector<std::string>& tokens, std::string* out) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out->push_back(' ');
    *out += tokens[i];
  }
}

}  // namespace

std::string FormatMassExample(const MassExample& ex) {
  std::string row = ex.language_tag;
  row += '\t';
  row += std::to_string(ex.span_start);
  row += '\t';
  row += std::to_string(ex.span_len);
  row += '\t';
  AppendJoined(ex.encoder_input, &row);
  row += '\t';
  AppendJoined(ex.decoder_target, &row);
  return row;
}

MassExample ParseMassExample(std::string_view row) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto tab = row.find('\t', pos);
    fields.push_back(row.substr(pos, tab == std::string_view::npos
                                         ? std::string_view::npos
                                         : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  if (fields.size() != 5) throw FormatError("MASS row needs 5 fields", 0);
  MassExample ex;
  ex.language_tag = std::string(fields[0]);
  for (auto [field, value] : {std::pair{fields[1], &ex.span_start},
                              std::pair{fields[2], &ex.span_len}}) {
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), *value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw FormatError("bad span field in MASS row", 0);
    }
  }
  for (auto t : SplitTokens(fields[3])) ex.encoder_input.emplace_back(t);
  for (auto t : SplitTokens(fields[4])) ex.decoder_target.emplace_back(t);
  return ex;
}

SelectionReport GenerateMassExamples(std::istream& in,
                                     const std::vector<std::string>* tags,
                                     const std::string& default_tag,
                                     const MaskConfig& config,
                                     std::ostream& out) {
  config.Validate();
  SelectionReport report;
  report.seed = config.seed;
  std::string line;
  std::uint64_t index = 0;
  for (; std::getline(in, line); ++index) {
    if (tags && index >= tags->size()) {
      throw Error("tag file has " + std::to_string(tags->size()) +
                  " rows but the corpus has more lines");
    }
    const Sentence sentence(std::move(line));
    if (sentence.empty()) {
      report.Reject(reason::kEmpty);
      continue;
    }
    const std::string& tag = tags ? (*tags)[index] : default_tag;
    out << FormatMassExample(MakeMassExample(sentence, index, config, tag))
        << '\n';
    report.Select();
  }
  if (tags && index != tags->size()) {
    throw Error("tag file has " + std::to_string(tags->size()) +
                " rows but the corpus has " + std::to_string(index) + " lines");
  }
  return report;
}

}  // namespace corpusprep
