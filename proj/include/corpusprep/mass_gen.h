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

// Masked sequence-to-sequence examples: one contiguous span per sentence is
// replaced by mask tokens in the encoder input and becomes the decoder
// target.

#ifndef CORPUSPREP_MASS_GEN_H_
#define CORPUSPREP_MASS_GEN_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "corpusprep/core.h"

namespace corpusprep {

struct MaskConfig {
  double mask_fraction = 0.5;
  std::uint64_t seed = 0;
  std::string mask_token = "<mask>";

  // Throws std::invalid_argument unless 0 < mask_fraction <= 1 and the mask
  // token is a non-empty whitespace-free string.
  void Validate() const;
};

struct MassExample {
  std::string language_tag;
  std::size_t span_start = 0;
  std::size_t span_len = 0;
  std::vector<std::string> encoder_input;
  std::vector<std::string> decoder_target;
};

// max(1, round(fraction * length)), rounding halves away from zero.
std::size_t MaskSpanLength(std::size_t length, double fraction);

// The example for the line at `line_index`; the span start is drawn
// uniformly from [0, length - span_len] by a generator seeded from
// (config.seed, line_index). Throws std::invalid_argument on an empty
// sentence.
MassExample MakeMassExample(const Sentence& sentence, std::uint64_t line_index,
                            const MaskConfig& config, std::string language_tag);

// True iff the span lies inside the sentence, the encoder input carries the
// mask token exactly on the span, and splicing the decoder target back in
// reproduces `original`.
bool VerifyExample(const MassExample& example, const Sentence& original,
                   std::string_view mask_token = "<mask>");

// `tag<TAB>start<TAB>len<TAB>encoder_input<TAB>decoder_target`.
std::string FormatMassExample(const MassExample& example);
// Throws FormatError (line 0) on malformed rows.
MassExample ParseMassExample(std::string_view row);

// One example per non-blank input line, in order. `tags` (may be null)
// gives the language tag per input line; otherwise `default_tag` is used.
// Blank lines are skipped with reason `empty`.
SelectionReport GenerateMassExamples(std::istream& in,
                                     const std::vector<std::string>* tags,
                                     const std::string& default_tag,
                                     const MaskConfig& config,
                                     std::ostream& out);

}  // namespace corpusprep

#endif  // CORPUSPREP_MASS_GEN_H_
