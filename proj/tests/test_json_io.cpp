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

#include "adsub/experiment.hpp"
#include "adsub/json_io.hpp"

using namespace adsub;
using nlohmann::json;

namespace {

bool instances_equal(const Instance& a, const Instance& b) {
  return instance_to_json(a) == instance_to_json(b);
}

}  // namespace

TEST_CASE("instances round-trip through JSON") {
  const auto check_roundtrip = [](const Instance& inst) {
    const json j = instance_to_json(inst);
    const Instance back = instance_from_json(j);
    CHECK(instances_equal(inst, back));
    CHECK(back.num_items() == inst.num_items());
    CHECK(back.support().size() == inst.support().size());
  };
  check_roundtrip(counterexample_instance(0.1));
  check_roundtrip(generate_instance(
      {{"type", "active-learning-random"}, {"points", 4}, {"hypotheses", 6}},
      7));
  check_roundtrip(generate_instance(
      {{"type", "viral-random"}, {"nodes", 4}, {"uncertain_edges", 3}}, 7));
  check_roundtrip(generate_instance({{"type", "coverage-random"},
                                     {"items", 3},
                                     {"universe", 5},
                                     {"subsets_per_item", 2}},
                                    7));
  check_roundtrip(generate_instance(
      {{"type", "sensors-random"}, {"sensors", 3}, {"locations", 2}}, 7));
}

TEST_CASE("round-tripped instances evaluate identically") {
  const Instance inst = generate_instance(
      {{"type", "active-learning-random"}, {"points", 4}, {"hypotheses", 8}},
      11);
  const Instance back = instance_from_json(instance_to_json(inst));
  for (std::size_t i = 0; i < inst.support().size(); ++i) {
    CHECK(inst.f(inst.ground_set(), static_cast<int>(i)) ==
          back.f(back.ground_set(), static_cast<int>(i)));
  }
  const PartialRealization empty;
  for (ItemId e = 0; e < inst.num_items(); ++e) {
    CHECK(inst.wc_marginal(e, empty) == back.wc_marginal(e, empty));
    CHECK(inst.avg_marginal(e, empty) == back.avg_marginal(e, empty));
  }
}

TEST_CASE("instance validation errors") {
  json j = instance_to_json(counterexample_instance(0.1));
  SUBCASE("wrong version") {
    j["version"] = "asm-0";
    CHECK_THROWS_AS(instance_from_json(j), Error);
  }
  SUBCASE("missing field") {
    j.erase("prior");
    CHECK_THROWS_AS(instance_from_json(j), Error);
  }
  SUBCASE("support cap") {
    CHECK_THROWS_AS(instance_from_json(j, /*support_cap=*/2), Error);
  }
  SUBCASE("unlisted table rows error at evaluation, not load") {
    j["utility"]["rows"].erase(3);  // drop one row
    const Instance inst = instance_from_json(j);
    bool threw = false;
    try {
      for (std::uint64_t mask = 0; mask < 8; ++mask) {
        inst.f(ItemSet{mask}, 0);
      }
    } catch (const Error& e) {
      threw = e.code() == ErrorCode::kUnknownTableEntry;
    }
    CHECK(threw);
  }
}

TEST_CASE("constraint descriptors parse") {
  const auto card = constraint_from_json({{"type", "cardinality"}, {"k", 2}}, 4);
  CHECK(card.kind() == ConstraintSystem::Kind::kCardinality);
  CHECK(card.cardinality_limit() == 2);

  const auto pm = constraint_from_json(
      {{"type", "partition"}, {"blocks", {{0, 1}, {2, 3}}}, {"limits", {1, 2}}},
      4);
  CHECK(pm.kind() == ConstraintSystem::Kind::kPartitionMatroid);
  CHECK(pm.declared_p() == 1);

  const auto ex = constraint_from_json(
      {{"type", "explicit"},
       {"independent_sets", {json::array(), {0}, {1}, {0, 1}}},
       {"p", 1}},
      2);
  CHECK(ex.kind() == ConstraintSystem::Kind::kExplicit);
  CHECK(ex.is_independent(ItemSet::from_items({0, 1})));

  CHECK_THROWS_AS(constraint_from_json({{"type", "nope"}}, 3), Error);
}

TEST_CASE("policy descriptors parse and bind") {
  const Instance inst = counterexample_instance(0.1);
  const auto c = ConstraintSystem::cardinality(3, 2);
  SUBCASE("k defaults to the constraint's cardinality") {
    const auto spec = policy_from_json({{"policy", "wc-card"}});
    const auto runner = make_runner(inst, c, spec);
    const auto run = runner(environment_for(inst, 1));
    CHECK(run.selections.size() == 2);
  }
  SUBCASE("beta fills q via the closed form") {
    auto spec = policy_from_json({{"policy", "hybrid-card"}, {"beta", 0.5}});
    CHECK(effective_q(spec) == doctest::Approx(0.5).epsilon(1e-12));
    spec = policy_from_json({{"policy", "hybrid-matroid"}, {"beta", 0.75}});
    CHECK(effective_q(spec) ==
          doctest::Approx(optimal_q_matroid(0.75)).epsilon(1e-12));
  }
  SUBCASE("explicit q wins over beta") {
    const auto spec = policy_from_json(
        {{"policy", "hybrid-card"}, {"beta", 0.9}, {"q", 0.5}});
    CHECK(effective_q(spec) == 0.5);
  }
  SUBCASE("stoch-wc needs eps") {
    const auto spec = policy_from_json({{"policy", "stoch-wc"}, {"k", 2}});
    CHECK_THROWS_AS(make_runner(inst, c, spec), Error);
  }
  SUBCASE("unknown policies are rejected") {
    CHECK_THROWS_AS(policy_from_json({{"policy", "mystery"}}), Error);
  }
}

TEST_CASE("decision trees export as nested JSON") {
  const Instance inst = counterexample_instance(0.1);
  const auto c = ConstraintSystem::cardinality(3, 2);
  const auto opt = opt_worst_case(inst, c);
  const json j = tree_to_json(*opt.tree);
  CHECK(j.at("item") == 1);
  CHECK(j.at("value") == 1.0);
  CHECK(j.contains("children"));
  // Stop nodes carry a null item.
  const json leaf = j.at("children").begin().value();
  CHECK(leaf.contains("item"));
}

TEST_CASE("generator descriptors validate") {
  CHECK_THROWS_AS(generate_instance({{"type", "unknown"}}, 1), Error);
  CHECK_THROWS_AS(
      generate_instance({{"type", "active-learning-random"}}, 1), Error);
  // Seed repetition produces byte-identical output.
  const json a = instance_to_json(generate_instance(
      {{"type", "active-learning-random"}, {"points", 5}, {"hypotheses", 9}},
      42));
  const json b = instance_to_json(generate_instance(
      {{"type", "active-learning-random"}, {"points", 5}, {"hypotheses", 9}},
      42));
  CHECK(a.dump() == b.dump());
}

TEST_CASE("experiment config parses and runs a tiny sweep") {
  const json config_json = {
      {"generator",
       {{"type", "active-learning-random"}, {"points", 4}, {"hypotheses", 6}}},
      {"seed", 3},
      {"policies",
       {{{"policy", "avg"}, {"name", "AP"}},
        {{"policy", "wc-card"}, {"name", "WP"}},
        {{"policy", "hybrid-card"}, {"name", "HP"}}}},
      {"k_min", 1},
      {"k_max", 3},
      {"repetitions", 2},
  };
  const auto config = experiment_config_from_json(config_json);
  const auto rows = run_experiment(config);
  REQUIRE(rows.size() == 9);  // 3 k-values x 3 policies
  // Sorted deterministically by (k, policy name).
  CHECK(rows[0].k == 1);
  CHECK(rows[0].policy == "AP");
  // Mean dominates min on every row of the same policy.
  for (const auto& row : rows) {
    CHECK(row.f_avg >= row.f_wc - 1e-9);
  }
  // Re-running reproduces the same numbers.
  const auto again = run_experiment(config);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].f_avg == again[i].f_avg);
    CHECK(rows[i].f_wc == again[i].f_wc);
  }
}

TEST_CASE("experiment config validation") {
  CHECK_THROWS_AS(experiment_config_from_json(json{{"k_min", 1}}), Error);
  const json no_policies = {
      {"generator", {{"type", "counterexample"}}},
      {"policies", json::array()},
      {"k_min", 1},
      {"k_max", 2},
  };
  CHECK_THROWS_AS(experiment_config_from_json(no_policies), Error);
  const json bad_sweep = {
      {"generator", {{"type", "counterexample"}}},
      {"policies", {{{"policy", "avg"}}}},
      {"k_min", 3},
      {"k_max", 2},
  };
  CHECK_THROWS_AS(experiment_config_from_json(bad_sweep), Error);
}
