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

#ifndef CORPUSPREP_MIXING_H_
#define CORPUSPREP_MIXING_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "corpusprep/core.h"

namespace corpusprep {

struct LanguageCorpus {
  std::string language_tag;
  std::string path;
  std::uint64_t line_count = 0;
};

// Parses "tag:path". Throws std::invalid_argument.
LanguageCorpus ParseCorpusArg(const std::string& arg);

// One output slot of a mix: line `line` of corpus `corpus`.
struct MixEntry {
  std::size_t corpus;
  std::size_t line;
};

// The mixing plan for corpora of the given sizes. With M the largest size,
// every corpus fills exactly M slots: floor(M / size) full copies plus a
// uniform sample without replacement of M mod size lines. The slots are then
// shuffled together. Deterministic in `seed`. Throws Error on an empty size
// list or a zero size.
std::vector<MixEntry> PlanOversampleMix(const std::vector<std::uint64_t>& sizes,
                                        std::uint64_t seed);

// Loads every corpus (filling line_count), writes the mixed lines to `out`
// and `line_index<TAB>tag` rows (0-based) to `tags_out`. Throws Error naming
// the tag of an empty corpus.
SelectionReport OversampleMix(std::vector<LanguageCorpus>& corpora,
                              std::uint64_t seed, std::ostream& out,
                              std::ostream& tags_out);

// Reads a `line_index<TAB>tag` sidecar. Throws FormatError when indices are
// not 0, 1, 2, ... in order.
std::vector<std::string> ReadTagFile(std::istream& in);
std::vector<std::string> LoadTagFile(const std::string& path);

}  // namespace corpusprep

#endif  // CORPUSPREP_MIXING_H_
