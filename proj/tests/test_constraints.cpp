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

#include <doctest.h>

#include "adsub/constraints.hpp"

using namespace adsub;

namespace {

// All subsets independent in both partition matroids.
ConstraintSystem two_matroid_intersection(
    int n, const ConstraintSystem& a, const ConstraintSystem& b, int p) {
  std::vector<ItemSet> family;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const ItemSet s{mask};
    if (a.is_independent(s) && b.is_independent(s)) family.push_back(s);
  }
  return ConstraintSystem::explicit_system(n, family, p);
}

}  // namespace

TEST_CASE("the empty set is independent everywhere") {
  CHECK(ConstraintSystem::cardinality(4, 2).is_independent(ItemSet{}));
  CHECK(ConstraintSystem::partition_matroid(3, {{0, 1}, {2}}, {1, 1})
            .is_independent(ItemSet{}));
  CHECK(ConstraintSystem::explicit_system(3, {}, 1).is_independent(ItemSet{}));
}

TEST_CASE("cardinality membership") {
  const auto c = ConstraintSystem::cardinality(4, 2);
  CHECK(c.is_independent(ItemSet::from_items({0, 1})));
  CHECK_FALSE(c.is_independent(ItemSet::from_items({0, 1, 2})));
}

TEST_CASE("partition matroid membership") {
  const auto c = ConstraintSystem::partition_matroid(3, {{0, 1}, {2}}, {1, 1});
  CHECK(c.is_independent(ItemSet::from_items({0, 2})));
  CHECK_FALSE(c.is_independent(ItemSet::from_items({0, 1})));
}

TEST_CASE("items outside every block are not selectable") {
  const auto c = ConstraintSystem::partition_matroid(4, {{0, 1}}, {2});
  CHECK_FALSE(c.is_independent(ItemSet::single(3)));
  const auto exts = c.feasible_extensions(ItemSet{});
  CHECK(exts == std::vector<ItemId>{0, 1});
}

TEST_CASE("feasible extensions") {
  SUBCASE("empty domain offers everything under cardinality") {
    const auto c = ConstraintSystem::cardinality(3, 2);
    CHECK(c.feasible_extensions(ItemSet{}) == std::vector<ItemId>{0, 1, 2});
  }
  SUBCASE("full budget offers nothing") {
    const auto c = ConstraintSystem::cardinality(3, 2);
    CHECK(c.feasible_extensions(ItemSet::from_items({0, 2})).empty());
  }
  SUBCASE("partition example") {
    const auto c =
        ConstraintSystem::partition_matroid(3, {{0, 1}, {2}}, {1, 1});
    CHECK(c.feasible_extensions(ItemSet::single(0)) ==
          std::vector<ItemId>{2});
  }
  SUBCASE("infeasible base errors") {
    const auto c = ConstraintSystem::cardinality(3, 1);
    CHECK_THROWS_AS(c.feasible_extensions(ItemSet::from_items({0, 1})), Error);
  }
}

TEST_CASE("feasible extensions agree with single-item membership") {
  const auto c = ConstraintSystem::partition_matroid(
      5, {{0, 1, 2}, {3, 4}}, {2, 1});
  for (std::uint64_t mask = 0; mask < 32; ++mask) {
    const ItemSet dom{mask};
    if (!c.is_independent(dom)) continue;
    const auto exts = c.feasible_extensions(dom);
    for (ItemId e = 0; e < 5; ++e) {
      const bool expected =
          !dom.contains(e) && c.is_independent(dom.with(e));
      const bool listed =
          std::find(exts.begin(), exts.end(), e) != exts.end();
      CHECK(listed == expected);
    }
  }
}

TEST_CASE("explicit systems reject non-downward-closed families") {
  CHECK_THROWS_AS(ConstraintSystem::explicit_system(
                      3, {ItemSet::from_items({0, 1})}, 1),
                  Error);
  // Closed family is fine.
  const auto c = ConstraintSystem::explicit_system(
      3,
      {ItemSet::single(0), ItemSet::single(1), ItemSet::from_items({0, 1})},
      1);
  CHECK(c.is_independent(ItemSet::from_items({0, 1})));
  CHECK_FALSE(c.is_independent(ItemSet::single(2)));
}

TEST_CASE("downward closure holds exhaustively") {
  const auto check_closure = [](const ConstraintSystem& c, int n) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      if (!c.is_independent(ItemSet{mask})) continue;
      for (std::uint64_t sub = mask; sub != 0; sub = (sub - 1) & mask) {
        CHECK(c.is_independent(ItemSet{sub}));
      }
    }
  };
  check_closure(ConstraintSystem::cardinality(8, 3), 8);
  check_closure(
      ConstraintSystem::partition_matroid(8, {{0, 1, 2}, {3, 4}, {5, 6, 7}},
                                          {1, 2, 2}),
      8);
}

TEST_CASE("p-system verification") {
  SUBCASE("cardinality is a 1-system for several n") {
    for (int n = 2; n <= 8; ++n) {
      const auto c = ConstraintSystem::cardinality(n, std::max(1, n / 2));
      CHECK(c.verify_p_system(1).ok);
    }
  }
  SUBCASE("partition matroids are 1-systems") {
    const auto c = ConstraintSystem::partition_matroid(
        6, {{0, 1, 2}, {3, 4}, {5}}, {2, 1, 1});
    CHECK(c.verify_p_system(1).ok);
  }
  SUBCASE("a two-matroid intersection verifies as a 2-system") {
    const auto a = ConstraintSystem::partition_matroid(
        4, {{0, 1}, {2, 3}}, {1, 1});
    const auto b = ConstraintSystem::partition_matroid(
        4, {{0, 2}, {1, 3}}, {1, 1});
    const auto c = two_matroid_intersection(4, a, b, 2);
    CHECK(c.verify_p_system(2).ok);
  }
  SUBCASE("a genuine 2-system fails verification at p=1") {
    // Family {∅,{0},{1},{0,1},{2}}: R = {0,1,2} has bases {0,1} and {2}.
    const auto c = ConstraintSystem::explicit_system(
        3,
        {ItemSet::single(0), ItemSet::single(1), ItemSet::single(2),
         ItemSet::from_items({0, 1})},
        2);
    const auto report = c.verify_p_system(1);
    CHECK_FALSE(report.ok);
    CHECK(report.min_base == 1);
    CHECK(report.max_base == 2);
    CHECK(c.verify_p_system(2).ok);
  }
  SUBCASE("oversized ground sets are refused") {
    const auto c = ConstraintSystem::cardinality(21, 2);
    CHECK_THROWS_AS(c.verify_p_system(1), Error);
  }
}

TEST_CASE("max independent size") {
  CHECK(ConstraintSystem::cardinality(5, 3).max_independent_size() == 3);
  CHECK(ConstraintSystem::partition_matroid(5, {{0, 1}, {2, 3, 4}}, {1, 2})
            .max_independent_size() == 3);
  // Limits clamp at the block size.
  CHECK(ConstraintSystem::partition_matroid(3, {{0}, {1, 2}}, {1, 5})
            .max_independent_size() == 3);
}
