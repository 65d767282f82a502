// Copyright 2025 The Authors.
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

#ifndef ADSUB_TYPES_HPP_
#define ADSUB_TYPES_HPP_

#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include "adsub/errors.hpp"

namespace adsub {

using ItemId = int;
using StateId = int;

// Ground sets are {0..n-1} with n <= 64 so item sets fit in one word.
constexpr int kMaxItems = 64;

class ItemSet {
 public:
  ItemSet() = default;
  explicit constexpr ItemSet(std::uint64_t mask) : mask_(mask) {}

  static constexpr ItemSet single(ItemId e) {
    return ItemSet(std::uint64_t{1} << e);
  }
  static constexpr ItemSet full(int n) {
    return ItemSet(n >= kMaxItems ? ~std::uint64_t{0}
                                  : (std::uint64_t{1} << n) - 1);
  }
  static ItemSet from_items(const std::vector<ItemId>& items) {
    ItemSet s;
    for (ItemId e : items) s.mask_ |= std::uint64_t{1} << e;
    return s;
  }

  bool empty() const { return mask_ == 0; }
  int size() const { return std::popcount(mask_); }
  bool contains(ItemId e) const { return (mask_ >> e) & 1; }
  bool subset_of(ItemSet o) const { return (mask_ & ~o.mask_) == 0; }
  ItemSet with(ItemId e) const {
    return ItemSet(mask_ | (std::uint64_t{1} << e));
  }
  ItemSet without(ItemId e) const {
    return ItemSet(mask_ & ~(std::uint64_t{1} << e));
  }
  ItemSet united(ItemSet o) const { return ItemSet(mask_ | o.mask_); }
  ItemSet intersected(ItemSet o) const { return ItemSet(mask_ & o.mask_); }
  std::uint64_t mask() const { return mask_; }

  std::vector<ItemId> items() const {
    std::vector<ItemId> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (std::uint64_t m = mask_; m != 0; m &= m - 1) {
      out.push_back(std::countr_zero(m));
    }
    return out;
  }

  friend bool operator==(ItemSet a, ItemSet b) { return a.mask_ == b.mask_; }
  friend bool operator<(ItemSet a, ItemSet b) { return a.mask_ < b.mask_; }

 private:
  std::uint64_t mask_ = 0;
};

// A full assignment of a state to every item: the hidden ground truth.
struct Realization {
  std::vector<StateId> states;

  StateId at(ItemId e) const { return states[static_cast<std::size_t>(e)]; }
  int num_items() const { return static_cast<int>(states.size()); }

  friend bool operator==(const Realization& a, const Realization& b) {
    return a.states == b.states;
  }
};

// The states observed so far for a subset of items. Immutable value type;
// observations are kept sorted by item so equal observation sets compare and
// hash identically regardless of selection order.
class PartialRealization {
 public:
  PartialRealization() = default;

  static PartialRealization from_pairs(
      std::vector<std::pair<ItemId, StateId>> obs);

  int size() const { return static_cast<int>(obs_.size()); }
  bool empty() const { return obs_.empty(); }
  ItemSet domain() const { return domain_; }
  bool contains(ItemId e) const { return domain_.contains(e); }
  StateId state_of(ItemId e) const;

  // Returns a copy extended by (e, o); e must not already be observed.
  PartialRealization with(ItemId e, StateId o) const;
  PartialRealization restricted_to(ItemSet d) const;
  // Union of two observation maps; they must agree on shared items.
  PartialRealization merged_with(const PartialRealization& other) const;

  const std::vector<std::pair<ItemId, StateId>>& observations() const {
    return obs_;
  }

  // Canonical encoding used as cache key: one word per observation,
  // (item << 16) | state, sorted by item.
  std::vector<std::uint32_t> packed() const;

  friend bool operator==(const PartialRealization& a,
                         const PartialRealization& b) {
    return a.obs_ == b.obs_;
  }
  friend bool operator<(const PartialRealization& a,
                        const PartialRealization& b) {
    return a.obs_ < b.obs_;
  }

 private:
  std::vector<std::pair<ItemId, StateId>> obs_;
  ItemSet domain_;
};

// phi(e) == psi(e) for all observed e.
bool consistent(const Realization& phi, const PartialRealization& psi);

// dom(a) subseteq dom(b) and they agree on dom(a).
bool subrealization(const PartialRealization& a, const PartialRealization& b);

}  // namespace adsub

#endif  // ADSUB_TYPES_HPP_
