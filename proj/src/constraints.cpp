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

#include "adsub/constraints.hpp"

#include <algorithm>
#include <string>

namespace adsub {

namespace {
void check_num_items(int num_items) {
  if (num_items < 1 || num_items > kMaxItems) {
    fail(ErrorCode::kValidation,
         "ground set size out of range: " + std::to_string(num_items));
  }
}
}  // namespace

ConstraintSystem ConstraintSystem::cardinality(int num_items, int k) {
  check_num_items(num_items);
  if (k < 0 || k > num_items) {
    fail(ErrorCode::kValidation,
         "cardinality limit out of range: " + std::to_string(k));
  }
  ConstraintSystem c;
  c.kind_ = Kind::kCardinality;
  c.num_items_ = num_items;
  c.k_ = k;
  c.declared_p_ = 1;
  return c;
}

ConstraintSystem ConstraintSystem::partition_matroid(
    int num_items, std::vector<std::vector<ItemId>> blocks,
    std::vector<int> limits) {
  check_num_items(num_items);
  if (blocks.size() != limits.size() || blocks.empty()) {
    fail(ErrorCode::kValidation, "blocks and limits sizes differ or empty");
  }
  ConstraintSystem c;
  c.kind_ = Kind::kPartitionMatroid;
  c.num_items_ = num_items;
  c.block_of_.assign(static_cast<std::size_t>(num_items), -1);
  for (std::size_t z = 0; z < blocks.size(); ++z) {
    if (limits[z] < 1) {
      fail(ErrorCode::kValidation, "partition matroid limit must be >= 1");
    }
    if (blocks[z].empty()) {
      fail(ErrorCode::kValidation, "partition matroid block is empty");
    }
    for (ItemId e : blocks[z]) {
      if (e < 0 || e >= num_items) {
        fail(ErrorCode::kValidation, "block item outside ground set");
      }
      if (c.block_of_[static_cast<std::size_t>(e)] != -1) {
        fail(ErrorCode::kValidation, "blocks are not disjoint");
      }
      c.block_of_[static_cast<std::size_t>(e)] = static_cast<int>(z);
    }
    std::sort(blocks[z].begin(), blocks[z].end());
  }
  c.blocks_ = std::move(blocks);
  c.limits_ = std::move(limits);
  c.declared_p_ = 1;
  return c;
}

ConstraintSystem ConstraintSystem::explicit_system(
    int num_items, std::vector<ItemSet> independent_sets, int declared_p) {
  check_num_items(num_items);
  if (declared_p < 1) {
    fail(ErrorCode::kValidation, "declared p must be >= 1");
  }
  ConstraintSystem c;
  c.kind_ = Kind::kExplicit;
  c.num_items_ = num_items;
  c.declared_p_ = declared_p;
  c.family_.insert(0);  // the empty set is always independent
  const ItemSet all = ItemSet::full(num_items);
  for (ItemSet s : independent_sets) {
    if (!s.subset_of(all)) {
      fail(ErrorCode::kValidation, "independent set outside ground set");
    }
    c.family_.insert(s.mask());
    c.max_explicit_size_ = std::max(c.max_explicit_size_, s.size());
  }
  for (std::uint64_t mask : c.family_) {
    for (ItemId e : ItemSet(mask).items()) {
      if (!c.family_.count(ItemSet(mask).without(e).mask())) {
        fail(ErrorCode::kValidation,
             "explicit family is not downward-closed at set mask " +
                 std::to_string(mask));
      }
    }
  }
  return c;
}

bool ConstraintSystem::is_independent(ItemSet s) const {
  switch (kind_) {
    case Kind::kCardinality:
      return s.size() <= k_;
    case Kind::kPartitionMatroid: {
      std::vector<int> counts(limits_.size(), 0);
      for (ItemId e : s.items()) {
        const int z = block_of_[static_cast<std::size_t>(e)];
        if (z == -1) return false;  // item belongs to no block, unselectable
        if (++counts[static_cast<std::size_t>(z)] >
            limits_[static_cast<std::size_t>(z)]) {
          return false;
        }
      }
      return true;
    }
    case Kind::kExplicit:
      return family_.count(s.mask()) != 0;
  }
  return false;
}

std::vector<ItemId> ConstraintSystem::feasible_extensions(ItemSet dom) const {
  if (!is_independent(dom)) {
    fail(ErrorCode::kInfeasibleBase,
         "observation domain is not independent");
  }
  std::vector<ItemId> out;
  for (ItemId e = 0; e < num_items_; ++e) {
    if (!dom.contains(e) && is_independent(dom.with(e))) {
      out.push_back(e);
    }
  }
  return out;
}

int ConstraintSystem::max_independent_size() const {
  switch (kind_) {
    case Kind::kCardinality:
      return k_;
    case Kind::kPartitionMatroid: {
      int total = 0;
      for (std::size_t z = 0; z < blocks_.size(); ++z) {
        total += std::min(limits_[z], static_cast<int>(blocks_[z].size()));
      }
      return total;
    }
    case Kind::kExplicit:
      return max_explicit_size_;
  }
  return 0;
}

ConstraintSystem::PSystemReport ConstraintSystem::verify_p_system(
    int p) const {
  if (num_items_ > 20) {
    fail(ErrorCode::kGroundSetTooLarge,
         "p-system verification is exhaustive; ground set exceeds 20 items");
  }
  PSystemReport report;
  const std::uint64_t limit = std::uint64_t{1} << num_items_;
  // DFS over independent subsets of R; downward-closure makes growing from
  // the empty set complete.
  std::vector<ItemId> stack_items;
  for (std::uint64_t r = 0; r < limit; ++r) {
    const ItemSet restriction{r};
    const auto members = restriction.items();
    int min_base = num_items_ + 1;
    int max_base = -1;
    // Iterative DFS: each frame is (set, next candidate position).
    std::vector<std::pair<ItemSet, std::size_t>> stack{{ItemSet{}, 0}};
    while (!stack.empty()) {
      auto [current, start] = stack.back();
      stack.pop_back();
      bool maximal = true;
      for (std::size_t i = 0; i < members.size(); ++i) {
        const ItemId e = members[i];
        if (current.contains(e)) continue;
        if (is_independent(current.with(e))) {
          maximal = false;
          if (i >= start) stack.push_back({current.with(e), i + 1});
        }
      }
      if (maximal) {
        min_base = std::min(min_base, current.size());
        max_base = std::max(max_base, current.size());
      }
    }
    if (max_base >= 0 && static_cast<long>(p) * min_base < max_base) {
      report.ok = false;
      report.violating_subset = restriction;
      report.min_base = min_base;
      report.max_base = max_base;
      return report;
    }
  }
  return report;
}

}  // namespace adsub
