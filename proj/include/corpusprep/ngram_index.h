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

#ifndef CORPUSPREP_NGRAM_INDEX_H_
#define CORPUSPREP_NGRAM_INDEX_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace corpusprep {

using WordId = std::uint32_t;

// Open-addressing map from fixed-order n-grams to dense entry indices
// 0..size()-1 in insertion order. Keys are stored contiguously; payloads
// live in caller-owned vectors indexed by entry.
class NGramIndex {
 public:
  static constexpr std::size_t kNotFound = static_cast<std::size_t>(-1);

  explicit NGramIndex(std::size_t order);

  std::size_t order() const { return order_; }
  std::size_t size() const { return size_; }

  std::size_t Find(std::span<const WordId> key) const;
  // Returns the entry index and whether it was newly inserted.
  std::pair<std::size_t, bool> Insert(std::span<const WordId> key);

  std::span<const WordId> Key(std::size_t entry) const {
    return {keys_.data() + entry * order_, order_};
  }

  void Reserve(std::size_t entries);

 private:
  static constexpr std::uint32_t kEmpty = 0xFFFFFFFFu;

  std::uint64_t Hash(std::span<const WordId> key) const;
  bool Equal(std::size_t entry, std::span<const WordId> key) const;
  void Rehash(std::size_t buckets);

  std::size_t order_;
  std::size_t size_ = 0;
  std::vector<WordId> keys_;
  std::vector<std::uint32_t> slots_;
  std::size_t mask_ = 0;
};

}  // namespace corpusprep

#endif  // CORPUSPREP_NGRAM_INDEX_H_
