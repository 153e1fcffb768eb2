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

#include "corpusprep/ngram_lm.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "corpusprep/core.h"
#include "corpusprep/utf8.h"

namespace corpusprep {

void SplitUnits(std::string_view line, Granularity granularity,
                std::vector<std::string_view>* units) {
  if (granularity == Granularity::kToken) {
    SplitTokens(line, units);
    return;
  }
  units->clear();
  std::size_t pos = 0;
  while (pos < line.size()) {
    if (IsAsciiSpace(line[pos])) {
      ++pos;
      continue;
    }
    const std::size_t start = pos;
    if (!utf8::DecodeOne(line, &pos)) pos = start + 1;
    units->push_back(line.substr(start, pos - start));
  }
}

WordId NGramModel::AddWord(std::string_view word) {
  const auto [it, inserted] =
      ids_.try_emplace(std::string(word), static_cast<WordId>(words_.size()));
  if (inserted) words_.emplace_back(word);
  return it->second;
}

WordId NGramModel::Lookup(std::string_view word) const {
  const auto it = ids_.find(std::string(word));
  return it == ids_.end() ? kUnkId : it->second;
}

bool NGramModel::has_unk() const {
  const WordId unk = kUnkId;
  return orders_[0].index.Find({&unk, 1}) != NGramIndex::kNotFound;
}

NGramModel NGramModel::Train(std::istream& corpus,
                             const TrainOptions& options) {
  return Train(ReadLines(corpus), options);
}

NGramModel NGramModel::Train(const std::vector<std::string>& corpus,
                             const TrainOptions& options) {
  const std::size_t order = options.order;
  if (order < 1) throw Error("n-gram order must be >= 1");
  const double d = options.discount;
  if (!(d > 0.0 && d < 1.0)) {
    throw std::invalid_argument("Kneser-Ney discount must lie in (0, 1)");
  }
  if (options.smoothing == Smoothing::kMleDiagnostic && order != 1) {
    throw std::invalid_argument("MLE diagnostic mode supports order 1 only");
  }

  NGramModel m;
  m.granularity_ = options.granularity;
  m.AddWord(kBos);
  m.AddWord(kEos);
  m.AddWord(kUnk);
  for (std::size_t n = 1; n <= order; ++n) m.orders_.emplace_back(n);

  // Pass 1: raw counts of every n-gram ending at a predicted position.
  std::vector<std::vector<std::uint64_t>> raw(order);
  std::vector<std::string_view> units;
  std::vector<WordId> seq;
  std::size_t sentences = 0;
  for (const std::string& line : corpus) {
    SplitUnits(line, options.granularity, &units);
    if (units.empty()) continue;
    ++sentences;
    seq.assign(1, kBosId);
    for (std::string_view u : units) seq.push_back(m.AddWord(u));
    seq.push_back(kEosId);
    if (raw[0].size() < m.words_.size()) raw[0].resize(m.words_.size(), 0);
    for (std::size_t i = 1; i < seq.size(); ++i) {
      ++raw[0][seq[i]];
      const std::size_t max_n = std::min(order, i + 1);
      for (std::size_t n = 2; n <= max_n; ++n) {
        const auto [e, fresh] = m.orders_[n - 1].index.Insert(
            std::span<const WordId>(seq.data() + i + 1 - n, n));
        if (fresh) raw[n - 1].push_back(0);
        ++raw[n - 1][e];
      }
    }
  }
  if (sentences == 0) throw Error("cannot train a language model on an empty corpus");

  // Unigram entries are the vocabulary in id order, so entry == id.
  const std::size_t vocab = m.words_.size();
  raw[0].resize(vocab, 0);
  m.orders_[0].index.Reserve(vocab);
  for (WordId id = 0; id < vocab; ++id) m.orders_[0].index.Insert({&id, 1});

  if (options.smoothing == Smoothing::kMleDiagnostic) {
    const std::uint64_t total =
        std::accumulate(raw[0].begin(), raw[0].end(), std::uint64_t{0});
    Order& uni = m.orders_[0];
    uni.logprob.resize(vocab);
    uni.backoff.assign(vocab, 0.0);
    for (WordId id = 0; id < vocab; ++id) {
      uni.logprob[id] =
          raw[0][id] ? std::log10(static_cast<double>(raw[0][id]) /
                                  static_cast<double>(total))
                     : kImpossibleLog10;
    }
    return m;
  }

  // Adjusted counts: raw counts at the top order and for n-grams that start
  // with <s>; otherwise the number of distinct left extensions.
  std::vector<std::vector<std::uint64_t>> adj(order);
  adj[order - 1] = raw[order - 1];
  for (std::size_t k = 0; k + 1 < order; ++k) {
    const Order& lower = m.orders_[k];
    const Order& upper = m.orders_[k + 1];
    adj[k].assign(lower.size(), 0);
    for (std::size_t e = 0; e < lower.size(); ++e) {
      if (lower.index.Key(e)[0] == kBosId) adj[k][e] = raw[k][e];
    }
    for (std::size_t f = 0; f < upper.size(); ++f) {
      const std::size_t e = lower.index.Find(upper.index.Key(f).subspan(1));
      ++adj[k][e];
    }
  }

  // Per-context totals. ctx_sum[k][e] / ctx_types[k][e] describe the
  // continuations of entry e of order k + 1 (0-based k) at order k + 2.
  std::vector<std::vector<std::uint64_t>> ctx_sum(order), ctx_types(order);
  for (std::size_t k = 0; k + 1 < order; ++k) {
    const Order& ctx = m.orders_[k];
    const Order& upper = m.orders_[k + 1];
    ctx_sum[k].assign(ctx.size(), 0);
    ctx_types[k].assign(ctx.size(), 0);
    for (std::size_t f = 0; f < upper.size(); ++f) {
      const auto key = upper.index.Key(f);
      const std::size_t c = ctx.index.Find(key.first(key.size() - 1));
      ctx_sum[k][c] += adj[k + 1][f];
      ++ctx_types[k][c];
    }
  }

  std::vector<std::vector<double>> prob(order);
  {
    // Unigrams interpolate with the uniform distribution over every
    // predictable word (the vocabulary minus <s>).
    std::uint64_t total = 0;
    std::uint64_t types = 0;
    for (WordId id = 0; id < vocab; ++id) {
      if (id == kBosId || adj[0][id] == 0) continue;
      total += adj[0][id];
      ++types;
    }
    const double gamma =
        d * static_cast<double>(types) / static_cast<double>(total);
    const double uniform = 1.0 / static_cast<double>(vocab - 1);
    prob[0].assign(vocab, 0.0);
    for (WordId id = 0; id < vocab; ++id) {
      if (id == kBosId) continue;
      const double a = static_cast<double>(adj[0][id]);
      prob[0][id] =
          std::max(a - d, 0.0) / static_cast<double>(total) + gamma * uniform;
    }
  }
  for (std::size_t k = 1; k < order; ++k) {
    const Order& cur = m.orders_[k];
    const Order& lower = m.orders_[k - 1];
    prob[k].resize(cur.size());
    for (std::size_t e = 0; e < cur.size(); ++e) {
      const auto key = cur.index.Key(e);
      const std::size_t c = lower.index.Find(key.first(k));
      const std::size_t s = lower.index.Find(key.subspan(1));
      const double a_sum = static_cast<double>(ctx_sum[k - 1][c]);
      const double gamma =
          d * static_cast<double>(ctx_types[k - 1][c]) / a_sum;
      prob[k][e] = (static_cast<double>(adj[k][e]) - d) / a_sum +
                   gamma * prob[k - 1][s];
    }
  }

  for (std::size_t k = 0; k < order; ++k) {
    Order& cur = m.orders_[k];
    cur.logprob.resize(cur.size());
    cur.backoff.assign(cur.size(), 0.0);
    for (std::size_t e = 0; e < cur.size(); ++e) {
      cur.logprob[e] = (k == 0 && e == kBosId) ? kImpossibleLog10
                                               : std::log10(prob[k][e]);
      if (k + 1 < order && ctx_sum[k][e] > 0) {
        cur.backoff[e] = std::log10(d * static_cast<double>(ctx_types[k][e]) /
                                    static_cast<double>(ctx_sum[k][e]));
      }
    }
  }
  return m;
}

double NGramModel::LogProb(std::span<const WordId> context,
                           WordId word) const {
  const std::size_t max_ctx = std::min(context.size(), order() - 1);
  std::array<WordId, 16> inline_buf;
  std::vector<WordId> heap_buf;
  WordId* buf = inline_buf.data();
  if (max_ctx + 1 > inline_buf.size()) {
    heap_buf.resize(max_ctx + 1);
    buf = heap_buf.data();
  }
  std::copy(context.end() - static_cast<std::ptrdiff_t>(max_ctx),
            context.end(), buf);
  buf[max_ctx] = word;

  double backoff = 0;
  for (std::size_t len = max_ctx;; --len) {
    const std::span<const WordId> key(buf + (max_ctx - len), len + 1);
    const std::size_t e = orders_[len].index.Find(key);
    if (e != NGramIndex::kNotFound) return backoff + orders_[len].logprob[e];
    if (len == 0) break;
    const std::size_t c = orders_[len - 1].index.Find(key.first(len));
    if (c != NGramIndex::kNotFound) backoff += orders_[len - 1].backoff[c];
  }
  return backoff + kMissingUnkLog10;
}

double NGramModel::LogProb(const std::vector<std::string_view>& context,
                           std::string_view word) const {
  std::vector<WordId> ids;
  ids.reserve(context.size());
  for (std::string_view w : context) ids.push_back(Lookup(w));
  return LogProb(ids, Lookup(word));
}

SentenceScore NGramModel::Score(std::string_view line) const {
  std::vector<std::string_view> units;
  SplitUnits(line, granularity_, &units);
  return ScoreUnits(units);
}

SentenceScore NGramModel::ScoreUnits(
    std::span<const std::string_view> units) const {
  std::vector<WordId> seq;
  seq.reserve(units.size() + 2);
  seq.push_back(kBosId);
  for (std::string_view u : units) seq.push_back(Lookup(u));
  seq.push_back(kEosId);
  SentenceScore score;
  for (std::size_t i = 1; i < seq.size(); ++i) {
    score.total_log10 += LogProb({seq.data(), i}, seq[i]);
    ++score.tokens_scored;
  }
  return score;
}

std::optional<double> NGramModel::StoredLogProb(
    std::span<const WordId> ngram) const {
  if (ngram.empty() || ngram.size() > order()) return std::nullopt;
  const Order& o = orders_[ngram.size() - 1];
  const std::size_t e = o.index.Find(ngram);
  if (e == NGramIndex::kNotFound) return std::nullopt;
  return o.logprob[e];
}

std::optional<double> NGramModel::StoredBackoff(
    std::span<const WordId> ngram) const {
  if (ngram.empty() || ngram.size() >= order()) return std::nullopt;
  const Order& o = orders_[ngram.size() - 1];
  const std::size_t e = o.index.Find(ngram);
  if (e == NGramIndex::kNotFound) return std::nullopt;
  return o.backoff[e];
}

void NGramModel::ForEachNGram(
    std::size_t n,
    const std::function<void(std::span<const WordId>, double, double)>& fn)
    const {
  const Order& o = orders_.at(n - 1);
  for (std::size_t e = 0; e < o.size(); ++e) {
    fn(o.index.Key(e), o.logprob[e], o.backoff[e]);
  }
}

// ---------------------------------------------------------------------------
// ARPA

namespace {

std::string FormatArpaNumber(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.7g", v);
  return buf;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsAsciiSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsAsciiSpace(s.back())) s.remove_suffix(1);
  return s;
}

bool ParseDouble(std::string_view s, double* v) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *v);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(*v);
}

bool ParseSize(std::string_view s, std::uint64_t* v) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

class ArpaLines {
 public:
  explicit ArpaLines(std::istream& in) : in_(in) {}

  // Next line, trimmed. False at EOF.
  bool Next(std::string_view* line) {
    if (pushed_back_) {
      pushed_back_ = false;
      *line = Trim(buf_);
      return true;
    }
    if (!std::getline(in_, buf_)) return false;
    ++line_no_;
    *line = Trim(buf_);
    return true;
  }
  bool NextNonBlank(std::string_view* line) {
    while (Next(line)) {
      if (!line->empty()) return true;
    }
    return false;
  }
  void PushBack() { pushed_back_ = true; }
  std::size_t line_no() const { return line_no_; }

 private:
  std::istream& in_;
  std::string buf_;
  std::size_t line_no_ = 0;
  bool pushed_back_ = false;
};

}  // namespace

NGramModel NGramModel::ReadArpa(std::istream& in, Granularity granularity) {
  ArpaLines lines(in);
  std::string_view line;

  // Anything before \data\ is preamble.
  bool found = false;
  while (lines.Next(&line)) {
    if (line == "\\data\\") {
      found = true;
      break;
    }
  }
  if (!found) throw FormatError("missing \\data\\ header", lines.line_no());

  std::vector<std::uint64_t> declared;
  while (lines.Next(&line)) {
    if (line.empty()) {
      if (declared.empty()) continue;
      break;
    }
    if (line.front() == '\\') {
      lines.PushBack();
      break;
    }
    if (!line.starts_with("ngram ")) {
      throw FormatError("expected `ngram N=count` in \\data\\ section",
                        lines.line_no());
    }
    const std::string_view spec = Trim(line.substr(6));
    const auto eq = spec.find('=');
    std::uint64_t n = 0, count = 0;
    if (eq == std::string_view::npos || !ParseSize(Trim(spec.substr(0, eq)), &n) ||
        !ParseSize(Trim(spec.substr(eq + 1)), &count)) {
      throw FormatError("malformed `ngram N=count` line", lines.line_no());
    }
    if (n != declared.size() + 1) {
      throw FormatError("n-gram orders in \\data\\ must be 1, 2, ... in order",
                        lines.line_no());
    }
    declared.push_back(count);
  }
  if (declared.empty()) {
    throw FormatError("\\data\\ section declares no n-gram counts",
                      lines.line_no());
  }

  NGramModel m;
  m.granularity_ = granularity;
  m.AddWord(kBos);
  m.AddWord(kEos);
  m.AddWord(kUnk);
  const std::size_t order = declared.size();
  for (std::size_t n = 1; n <= order; ++n) m.orders_.emplace_back(n);

  std::vector<std::string_view> fields;
  std::vector<WordId> key;
  for (std::size_t n = 1; n <= order; ++n) {
    const std::string header = "\\" + std::to_string(n) + "-grams:";
    if (!lines.NextNonBlank(&line) || line != header) {
      throw FormatError("expected section header " + header, lines.line_no());
    }
    const std::size_t header_line = lines.line_no();
    Order& o = m.orders_[n - 1];
    o.index.Reserve(declared[n - 1]);
    while (lines.Next(&line)) {
      if (line.empty()) break;
      if (line.front() == '\\') {
        lines.PushBack();
        break;
      }
      SplitTokens(line, &fields);
      const bool with_backoff = fields.size() == n + 2;
      if (fields.size() != n + 1 && !(with_backoff && n < order)) {
        throw FormatError("malformed " + std::to_string(n) + "-gram entry",
                          lines.line_no());
      }
      double logprob = 0, backoff = 0;
      if (!ParseDouble(fields[0], &logprob) || logprob > 0) {
        throw FormatError("bad log10 probability", lines.line_no());
      }
      if (with_backoff && !ParseDouble(fields[n + 1], &backoff)) {
        throw FormatError("bad log10 backoff", lines.line_no());
      }
      key.clear();
      for (std::size_t i = 1; i <= n; ++i) {
        if (n == 1) {
          key.push_back(m.AddWord(fields[i]));
          continue;
        }
        const auto it = m.ids_.find(std::string(fields[i]));
        const WordId id = it == m.ids_.end() ? kUnkId : it->second;
        if (it == m.ids_.end() ||
            m.orders_[0].index.Find({&id, 1}) == NGramIndex::kNotFound) {
          throw FormatError("word `" + std::string(fields[i]) +
                                "` is not in the unigram section",
                            lines.line_no());
        }
        key.push_back(id);
      }
      if (!o.index.Insert(key).second) {
        throw FormatError("duplicate " + std::to_string(n) + "-gram entry",
                          lines.line_no());
      }
      o.logprob.push_back(logprob);
      o.backoff.push_back(backoff);
    }
    if (o.size() != declared[n - 1]) {
      throw FormatError("\\data\\ declares " + std::to_string(declared[n - 1]) +
                            " " + std::to_string(n) + "-grams but the section lists " +
                            std::to_string(o.size()),
                        header_line);
    }
    if (n == 1) {
      for (WordId required : {kBosId, kEosId}) {
        if (o.index.Find({&required, 1}) == NGramIndex::kNotFound) {
          throw FormatError("unigram section lacks " + m.words_[required],
                            header_line);
        }
      }
    }
  }
  if (!lines.NextNonBlank(&line) || line != "\\end\\") {
    throw FormatError("expected \\end\\", lines.line_no());
  }
  return m;
}

NGramModel NGramModel::LoadArpa(const std::string& path,
                                Granularity granularity) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return ReadArpa(in, granularity);
}

void NGramModel::WriteArpa(std::ostream& out) const {
  out << "\\data\\\n";
  for (std::size_t n = 1; n <= order(); ++n) {
    out << "ngram " << n << '=' << orders_[n - 1].size() << '\n';
  }
  out << '\n';
  std::vector<std::size_t> entries;
  for (std::size_t n = 1; n <= order(); ++n) {
    const Order& o = orders_[n - 1];
    entries.resize(o.size());
    std::iota(entries.begin(), entries.end(), std::size_t{0});
    std::sort(entries.begin(), entries.end(), [&](std::size_t a, std::size_t b) {
      const auto ka = o.index.Key(a);
      const auto kb = o.index.Key(b);
      return std::lexicographical_compare(
          ka.begin(), ka.end(), kb.begin(), kb.end(),
          [&](WordId x, WordId y) { return words_[x] < words_[y]; });
    });
    out << '\\' << n << "-grams:\n";
    for (std::size_t e : entries) {
      out << FormatArpaNumber(o.logprob[e]) << '\t';
      const auto key = o.index.Key(e);
      for (std::size_t i = 0; i < key.size(); ++i) {
        if (i) out << ' ';
        out << words_[key[i]];
      }
      if (n < order()) out << '\t' << FormatArpaNumber(o.backoff[e]);
      out << '\n';
    }
    out << '\n';
  }
  out << "\\end\\\n";
}

void NGramModel::SaveArpa(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  WriteArpa(out);
  if (!out) throw Error("write failed: " + path);
}

double Perplexity(const NGramModel& model,
                  const std::vector<std::string>& corpus) {
  if (corpus.empty()) throw Error("perplexity of an empty corpus");
  double total = 0;
  std::size_t tokens = 0;
  for (const auto& line : corpus) {
    const SentenceScore s = model.Score(line);
    total += s.total_log10;
    tokens += s.tokens_scored;
  }
  return std::pow(10.0, -total / static_cast<double>(tokens));
}

double Perplexity(const NGramModel& model, std::istream& corpus) {
  return Perplexity(model, ReadLines(corpus));
}

std::string FormatScore(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("cannot format score");
  return std::string(buf, ptr);
}

}  // namespace corpusprep
