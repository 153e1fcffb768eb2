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

#ifndef CORPUSPREP_UTF8_H_
#define CORPUSPREP_UTF8_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace corpusprep {
namespace utf8 {

// Strict validation: rejects overlong forms, surrogates and values above
// U+10FFFF.
bool IsValid(std::string_view text);

bool IsAscii(std::string_view text);

// Decodes one scalar starting at `pos`, advancing `pos` past it. Returns
// nullopt (and leaves `pos` unchanged) on an ill-formed sequence.
std::optional<char32_t> DecodeOne(std::string_view text, std::size_t* pos);

// Throws std::invalid_argument on ill-formed input.
std::u32string Decode(std::string_view text);

void AppendScalar(char32_t c, std::string* out);
std::string Encode(std::u32string_view scalars);
std::string Encode(char32_t c);

// Number of scalars; input must be valid.
std::size_t CountScalars(std::string_view text);

}  // namespace utf8
}  // namespace corpusprep

#endif  // CORPUSPREP_UTF8_H_
