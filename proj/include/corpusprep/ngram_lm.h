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

// Backoff n-gram language model: interpolated Kneser-Ney training with a
// single fixed discount, backoff scoring, and ARPA text persistence.
//
// Conventions follow the common toolkits: sentences are padded with <s> and
// </s>; <s> is only ever a context (its unigram carries log10 prob -99);
// </s> is always predicted; unseen words map to <unk>, whose probability is
// the share of the unigram discount mass spread uniformly over the
// vocabulary. A stored n-gram's log10 prob is the full interpolated value,
// and the backoff weight of a context is the interpolation weight of the
// lower order, so plain backoff evaluation reproduces the interpolated
// distribution exactly.

#ifndef CORPUSPREP_NGRAM_LM_H_
#define CORPUSPREP_NGRAM_LM_H_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpusprep/ngram_index.h"

namespace corpusprep {

enum class Granularity {
  kToken,      // whitespace-delimited tokens
  kCharacter,  // Unicode scalars; whitespace is dropped
};

enum class Smoothing {
  kKneserNey,
  // Unsmoothed relative frequencies, unigram order only. Exists so that
  // closed-form count ratios can be checked; not for real use.
  kMleDiagnostic,
};

struct TrainOptions {
  std::size_t order = 5;
  Granularity granularity = Granularity::kToken;
  Smoothing smoothing = Smoothing::kKneserNey;
  double discount = 0.75;
};

struct SentenceScore {
  double total_log10 = 0;
  std::size_t tokens_scored = 0;  // sentence length + 1 for </s>

  double per_token_log10() const {
    return tokens_scored ? total_log10 / static_cast<double>(tokens_scored)
                         : 0.0;
  }
};

// Splits `line` into model units for the given granularity. Views point
// into `line`. Ill-formed UTF-8 bytes become single-byte units under
// character granularity.
void SplitUnits(std::string_view line, Granularity granularity,
                std::vector<std::string_view>* units);

inline constexpr char kBos[] = "<s>";
inline constexpr char kEos[] = "</s>";
inline constexpr char kUnk[] = "<unk>";

class NGramModel {
 public:
  static constexpr WordId kBosId = 0;
  static constexpr WordId kEosId = 1;
  static constexpr WordId kUnkId = 2;
  // ARPA convention for impossible events.
  static constexpr double kImpossibleLog10 = -99.0;
  // Used for OOV words when the model has no <unk> entry.
  static constexpr double kMissingUnkLog10 = -100.0;

  // Blank lines are skipped. Throws Error on an empty corpus or order 0,
  // std::invalid_argument on a bad discount or MLE with order > 1.
  static NGramModel Train(const std::vector<std::string>& corpus,
                          const TrainOptions& options);
  static NGramModel Train(std::istream& corpus, const TrainOptions& options);

  // Throws FormatError (with line number) on malformed input.
  static NGramModel ReadArpa(std::istream& in,
                             Granularity granularity = Granularity::kToken);
  static NGramModel LoadArpa(const std::string& path,
                             Granularity granularity = Granularity::kToken);
  void WriteArpa(std::ostream& out) const;
  void SaveArpa(const std::string& path) const;

  std::size_t order() const { return orders_.size(); }
  Granularity granularity() const { return granularity_; }
  void set_granularity(Granularity g) { granularity_ = g; }

  std::size_t vocab_size() const { return words_.size(); }
  const std::string& word(WordId id) const { return words_[id]; }
  // kUnkId for words outside the vocabulary.
  WordId Lookup(std::string_view word) const;
  bool has_unk() const;

  // log10 P(word | context) by backoff; `context` is oldest-first and may be
  // longer than order - 1 (only the tail is used).
  double LogProb(std::span<const WordId> context, WordId word) const;
  double LogProb(const std::vector<std::string_view>& context,
                 std::string_view word) const;

  SentenceScore Score(std::string_view line) const;
  SentenceScore ScoreUnits(std::span<const std::string_view> units) const;

  std::size_t ngram_count(std::size_t n) const { return orders_[n - 1].size(); }
  std::optional<double> StoredLogProb(std::span<const WordId> ngram) const;
  std::optional<double> StoredBackoff(std::span<const WordId> ngram) const;
  // Visits stored n-grams of order n in storage order.
  void ForEachNGram(std::size_t n,
                    const std::function<void(std::span<const WordId>, double,
                                             double)>& fn) const;

 private:
  struct Order {
    explicit Order(std::size_t n) : index(n) {}
    std::size_t size() const { return index.size(); }
    NGramIndex index;
    std::vector<double> logprob;
    std::vector<double> backoff;  // log10; 0 when absent
  };

  NGramModel() = default;
  WordId AddWord(std::string_view word);

  Granularity granularity_ = Granularity::kToken;
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> ids_;
  std::vector<Order> orders_;
};

// 10^(-sum(total_log10) / sum(tokens_scored)). Throws Error on an empty
// corpus.
double Perplexity(const NGramModel& model,
                  const std::vector<std::string>& corpus);
double Perplexity(const NGramModel& model, std::istream& corpus);

// Shortest decimal that round-trips to the same double.
std::string FormatScore(double value);

}  // namespace corpusprep

#endif  // CORPUSPREP_NGRAM_LM_H_
