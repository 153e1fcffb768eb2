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

// Character-level script conversion driven by a mapping table, e.g. hanzi to
// kanji. Two modes: take each character's first candidate, or enumerate the
// candidate combinations of a whole token and keep the one a target-side
// character language model scores highest.

#ifndef CORPUSPREP_SCRIPT_MAP_H_
#define CORPUSPREP_SCRIPT_MAP_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpusprep/core.h"
#include "corpusprep/ngram_lm.h"

namespace corpusprep {

// Source scalar -> candidate scalars in priority (file) order. Candidate
// lists are non-empty and duplicate-free.
class MappingTable {
 public:
  // TSV: `source<TAB>cand1 cand2 ...`; `#` lines and blank lines are
  // skipped. Throws FormatError with the offending line number.
  static MappingTable Read(std::istream& in);
  static MappingTable Load(const std::string& path);

  // Throws std::invalid_argument if the entry breaks the table invariants or
  // `source` already has one.
  void Add(char32_t source, std::vector<char32_t> candidates);

  // Null when `c` has no entry.
  const std::vector<char32_t>* Find(char32_t c) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool has_ascii_keys() const { return has_ascii_keys_; }

 private:
  std::unordered_map<char32_t, std::vector<char32_t>> entries_;
  bool has_ascii_keys_ = false;
};

enum class MappingMode { kOneToOne, kLmScored };

struct MappingConfig {
  MappingMode mode = MappingMode::kOneToOne;
  std::size_t candidate_cap = 4096;
  // Character-level target-language model; required for kLmScored.
  const NGramModel* lm = nullptr;

  // Throws std::invalid_argument when the lm/mode pairing or cap is invalid.
  void Validate() const;
};

// Report counter for tokens that exceeded the candidate cap.
inline constexpr char kCapFallbackCounter[] = "lm_cap_fallback";

// First-candidate replacement; unmapped scalars pass through. Input must be
// valid UTF-8.
std::string MapOneToOne(std::string_view text, const MappingTable& table);

// Number of candidate strings for `token` (product of candidate list sizes),
// saturating at SIZE_MAX.
std::size_t CountCombinations(std::string_view token, const MappingTable& table);

// Every candidate string for `token` in enumeration order: first-candidate
// order per position, leftmost position varying slowest.
std::vector<std::string> EnumerateCandidates(std::string_view token,
                                             const MappingTable& table);

class ScriptMapper {
 public:
  ScriptMapper(const MappingTable& table, const MappingConfig& config);

  // Maps one line. In LM mode each whitespace token is mapped independently
  // and the separators are kept as they are. Bumps kCapFallbackCounter in
  // `report` (if given) when a token exceeds the cap.
  std::string MapLine(std::string_view line, SelectionReport* report = nullptr) const;
  std::string MapToken(std::string_view token, bool* fell_back = nullptr) const;

 private:
  const MappingTable& table_;
  MappingConfig config_;
};

// Streams `in` to `out`. Ill-formed UTF-8 lines are dropped with reason
// `invalid_utf8`.
SelectionReport RunScriptMapping(std::istream& in, std::ostream& out,
                                 const MappingTable& table,
                                 const MappingConfig& config);

}  // namespace corpusprep

#endif  // CORPUSPREP_SCRIPT_MAP_H_
