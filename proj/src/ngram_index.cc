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

#include "corpusprep/ngram_index.h"

#include <algorithm>
#include <stdexcept>

#include "corpusprep/random.h"

namespace corpusprep {

NGramIndex::NGramIndex(std::size_t order) : order_(order) {
  if (order == 0) throw std::invalid_argument("n-gram order must be >= 1");
  Rehash(16);
}

std::uint64_t NGramIndex::Hash(std::span<const WordId> key) const {
  std::uint64_t h = 0x84222325CBF29CE4ULL;
  for (WordId w : key) h = Mix64(h ^ w);
  return h;
}

bool NGramIndex::Equal(std::size_t entry, std::span<const WordId> key) const {
  return std::equal(key.begin(), key.end(), keys_.begin() + entry * order_);
}

std::size_t NGramIndex::Find(std::span<const WordId> key) const {
  if (key.size() != order_) return kNotFound;
  for (std::size_t i = Hash(key) & mask_;; i = (i + 1) & mask_) {
    const std::uint32_t slot = slots_[i];
    if (slot == kEmpty) return kNotFound;
    if (Equal(slot, key)) return slot;
  }
}

std::pair<std::size_t, bool> NGramIndex::Insert(std::span<const WordId> key) {
  if (key.size() != order_) {
    throw std::invalid_argument("n-gram key has the wrong order");
  }
  // Load factor <= 1/2.
  if ((size_ + 1) * 2 > slots_.size()) Rehash(slots_.size() * 2);
  std::size_t i = Hash(key) & mask_;
  for (;; i = (i + 1) & mask_) {
    const std::uint32_t slot = slots_[i];
    if (slot == kEmpty) break;
    if (Equal(slot, key)) return {slot, false};
  }
  if (size_ >= kEmpty) throw std::length_error("n-gram index full");
  slots_[i] = static_cast<std::uint32_t>(size_);
  keys_.insert(keys_.end(), key.begin(), key.end());
  return {size_++, true};
}

void NGramIndex::Reserve(std::size_t entries) {
  keys_.reserve(entries * order_);
  std::size_t buckets = slots_.size();
  while (entries * 2 > buckets) buckets *= 2;
  if (buckets != slots_.size()) Rehash(buckets);
}

void NGramIndex::Rehash(std::size_t buckets) {
  slots_.assign(buckets, kEmpty);
  mask_ = buckets - 1;
  for (std::size_t e = 0; e < size_; ++e) {
    std::size_t i = Hash(Key(e)) & mask_;
    while (slots_[i] != kEmpty) i = (i + 1) & mask_;
    slots_[i] = static_cast<std::uint32_t>(e);
  }
}

}  // namespace corpusprep
