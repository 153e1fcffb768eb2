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

#include "corpusprep/normalize_filter.h"

#include <istream>
#include <ostream>
#include <stdexcept>

#include <unicode/bytestream.h>
#include <unicode/normalizer2.h>
#include <unicode/stringpiece.h>

#include "corpusprep/utf8.h"

namespace corpusprep {
namespace {

const icu::Normalizer2& Nfkc() {
  static const icu::Normalizer2* const instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFKCInstance(status);
    if (U_FAILURE(status)) {
      throw Error(std::string("ICU NFKC unavailable: ") + u_errorName(status));
    }
    return n;
  }();
  return *instance;
}

bool IsAsciiAlpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool IsHan(char32_t c) {
  return (c >= 0x4E00 && c <= 0x9FFF) || (c >= 0x3400 && c <= 0x4DBF);
}

}  // namespace

std::string NfkcNormalize(std::string_view line) {
  // Every ASCII scalar is its own NFKC form.
  if (utf8::IsAscii(line)) return std::string(line);
  if (!utf8::IsValid(line)) {
    throw std::invalid_argument("NfkcNormalize: ill-formed UTF-8");
  }
  std::string out;
  out.reserve(line.size());
  icu::StringByteSink<std::string> sink(&out, static_cast<int32_t>(line.size()));
  UErrorCode status = U_ZERO_ERROR;
  Nfkc().normalizeUTF8(
      0, icu::StringPiece(line.data(), static_cast<int32_t>(line.size())),
      sink, nullptr, status);
  if (U_FAILURE(status)) {
    throw Error(std::string("NFKC normalization failed: ") +
                u_errorName(status));
  }
  return out;
}

void FilterRule::Validate() const {
  if (min_tokens == 0 || min_tokens >= max_tokens) {
    throw std::invalid_argument(
        "filter rule needs 0 < min_tokens < max_tokens, got " +
        std::to_string(min_tokens) + " and " + std::to_string(max_tokens));
  }
  auto in_unit = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!in_unit(cjk_min_ratio) || !in_unit(ascii_max_ratio)) {
    throw std::invalid_argument("filter ratios must lie in [0, 1]");
  }
}

TokenClass ClassifyToken(std::string_view token) {
  if (token.empty()) return TokenClass::kOther;
  bool all_alpha = true;
  for (char c : token) {
    if (!IsAsciiAlpha(c)) {
      all_alpha = false;
      break;
    }
  }
  if (all_alpha) return TokenClass::kEnglish;
  std::size_t pos = 0;
  while (pos < token.size()) {
    const auto c = utf8::DecodeOne(token, &pos);
    if (!c) throw std::invalid_argument("ClassifyToken: ill-formed UTF-8");
    if (IsHan(*c)) return TokenClass::kChinese;
  }
  return TokenClass::kOther;
}

FilterDecision TokenLengthFilter(std::size_t length, const FilterRule& rule) {
  if (length < rule.min_tokens) return FilterDecision::Reject(reason::kTooShort);
  if (length >= rule.max_tokens) return FilterDecision::Reject(reason::kTooLong);
  return FilterDecision::Keep();
}

FilterDecision TokenLengthFilter(const Sentence& sentence,
                                 const FilterRule& rule) {
  return TokenLengthFilter(sentence.length(), rule);
}

namespace {

template <typename Tokens>
FilterDecision RatioDecision(const Tokens& tokens, const FilterRule& rule) {
  if (tokens.empty()) return FilterDecision::Reject(reason::kEmpty);
  std::size_t chinese = 0;
  std::size_t english = 0;
  for (std::string_view t : tokens) {
    switch (ClassifyToken(t)) {
      case TokenClass::kChinese: ++chinese; break;
      case TokenClass::kEnglish: ++english; break;
      case TokenClass::kOther: break;
    }
  }
  // Division rather than scaling the ratio: c/n is correctly rounded, so an
  // exact 3/10 compares equal to the literal 0.3.
  const double n = static_cast<double>(tokens.size());
  if (static_cast<double>(chinese) / n < rule.cjk_min_ratio) {
    return FilterDecision::Reject(reason::kLowCjkRatio);
  }
  if (static_cast<double>(english) / n > rule.ascii_max_ratio) {
    return FilterDecision::Reject(reason::kHighAsciiRatio);
  }
  return FilterDecision::Keep();
}

}  // namespace

FilterDecision CjkRatioFilter(const Sentence& sentence,
                              const FilterRule& rule) {
  return RatioDecision(sentence.tokens(), rule);
}

LineFilter::LineFilter(const FilterRule& rule) : rule_(rule) {
  rule_.Validate();
}

FilterDecision LineFilter::Decide(std::string_view line) {
  if (!utf8::IsValid(line)) return FilterDecision::Reject(reason::kInvalidUtf8);
  SplitTokens(line, &tokens_);
  if (tokens_.empty()) return FilterDecision::Reject(reason::kEmpty);
  const FilterDecision by_length = TokenLengthFilter(tokens_.size(), rule_);
  if (!by_length.keep || !rule_.cjk_filter_enabled) return by_length;
  return RatioDecision(tokens_, rule_);
}

SelectionReport RunFilterPipeline(std::istream& in, std::ostream& out,
                                  const FilterRule& rule) {
  LineFilter filter(rule);
  SelectionReport report;
  std::string line;
  while (std::getline(in, line)) {
    const FilterDecision d = filter.Decide(line);
    if (d.keep) {
      out << line << '\n';
      report.Select();
    } else {
      report.Reject(d.reason);
    }
  }
  return report;
}

SelectionReport RunNormalizePipeline(std::istream& in, std::ostream& out) {
  SelectionReport report;
  std::string line;
  while (std::getline(in, line)) {
    if (utf8::IsAscii(line)) {
      out << line << '\n';
    } else if (utf8::IsValid(line)) {
      out << NfkcNormalize(line) << '\n';
    } else {
      report.Reject(reason::kInvalidUtf8);
      continue;
    }
    report.Select();
  }
  return report;
}

}  // namespace corpusprep
