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

#ifndef ADSUB_CONSTRAINTS_HPP_
#define ADSUB_CONSTRAINTS_HPP_

#include <optional>
#include <unordered_set>
#include <vector>

#include "adsub/types.hpp"

namespace adsub {

// Independence system used as the feasibility oracle by all policies.
// Immutable after construction; safe for concurrent queries.
class ConstraintSystem {
 public:
  enum class Kind { kCardinality, kPartitionMatroid, kExplicit };

  static ConstraintSystem cardinality(int num_items, int k);
  // Disjoint blocks covering a subset of the ground set; items outside all
  // blocks are not selectable. limits[z] bounds |E_z ∩ S|.
  static ConstraintSystem partition_matroid(int num_items,
                                            std::vector<std::vector<ItemId>> blocks,
                                            std::vector<int> limits);
  // Downward-closed family given extensionally. The empty set is implied;
  // construction rejects families missing any subset of a member.
  static ConstraintSystem explicit_system(int num_items,
                                          std::vector<ItemSet> independent_sets,
                                          int declared_p);

  Kind kind() const { return kind_; }
  int num_items() const { return num_items_; }
  // The p such that the system is declared a p-system. Verified only on
  // demand via verify_p_system.
  int declared_p() const { return declared_p_; }
  int cardinality_limit() const { return k_; }
  const std::vector<std::vector<ItemId>>& blocks() const { return blocks_; }
  const std::vector<int>& limits() const { return limits_; }

  bool is_independent(ItemSet s) const;

  // V = { e not in dom : dom ∪ {e} independent }. The base must itself be
  // independent.
  std::vector<ItemId> feasible_extensions(ItemSet dom) const;
  std::vector<ItemId> feasible_extensions(const PartialRealization& psi) const {
    return feasible_extensions(psi.domain());
  }

  // Largest independent set size; used as a search-depth bound.
  int max_independent_size() const;

  struct PSystemReport {
    bool ok = true;
    // Populated on failure: the violating subset R and its extreme base sizes.
    ItemSet violating_subset;
    int min_base = 0;
    int max_base = 0;
  };
  // Exhaustive check that for every R ⊆ E, p * (min base of R) >= max base
  // of R. Exponential; refuses ground sets beyond 20 items.
  PSystemReport verify_p_system(int p) const;

 private:
  ConstraintSystem() = default;

  Kind kind_ = Kind::kCardinality;
  int num_items_ = 0;
  int declared_p_ = 1;

  int k_ = 0;                                // cardinality
  std::vector<std::vector<ItemId>> blocks_;  // partition matroid
  std::vector<int> limits_;
  std::vector<int> block_of_;  // item -> block index, -1 when unselectable
  std::unordered_set<std::uint64_t> family_;  // explicit system
  int max_explicit_size_ = 0;
};

}  // namespace adsub

#endif  // ADSUB_CONSTRAINTS_HPP_
