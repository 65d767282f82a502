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

#ifndef ADSUB_ORACLE_HPP_
#define ADSUB_ORACLE_HPP_

#include <functional>
#include <map>
#include <memory>
#include <optional>

#include "adsub/constraints.hpp"
#include "adsub/model.hpp"
#include "adsub/policies.hpp"

namespace adsub {

// A compiled contingency plan: the chosen item at each observation (or stop),
// with one child per possible state of the chosen item.
struct DecisionTreeNode {
  ItemId item = -1;  // -1 means stop
  double value = 0;
  std::map<StateId, std::unique_ptr<DecisionTreeNode>> children;

  bool stops() const { return item == -1; }
};

struct OracleResult {
  double value = 0;
  std::unique_ptr<DecisionTreeNode> tree;
};

// Exact optimal worst-case adaptive policy by backward induction over the
// observation game: nature answers each selection with the state minimizing
// the continuation value, constrained to stay consistent with some support
// realization; for deterministic policies this equals max over policies of
// the min over realizations. Ties prefer stopping, then the lowest item id.
OracleResult opt_worst_case(const Instance& inst,
                            const ConstraintSystem& constraint,
                            double work_cap = 1e7);

// Exact optimal average-case adaptive policy by backward induction with
// conditional state probabilities.
OracleResult opt_average_case(const Instance& inst,
                              const ConstraintSystem& constraint,
                              double work_cap = 1e7);

// Runs a decision tree as a policy against an environment.
PolicyRun run_decision_tree(const Instance& inst, const DecisionTreeNode& tree,
                            const Environment& env);

using PolicyRunner = std::function<PolicyRun(const Environment&)>;

struct RobustnessReport {
  double f_wc = 0;
  double f_avg = 0;
  double opt_wc = 0;
  double opt_avg = 0;
  // Undefined (left empty) when the corresponding optimum is zero.
  std::optional<double> wc_ratio;
  std::optional<double> avg_ratio;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> alpha_beta;
};

// Runs the policy against every support realization; reports its exact
// worst-case and average-case utilities, the oracle optima, and the
// (beta-weighted) robustness ratios.
RobustnessReport eval_exact(const Instance& inst,
                            const ConstraintSystem& constraint,
                            const PolicyRunner& policy,
                            std::optional<double> beta = std::nullopt);
// Variant with precomputed optima (avoids re-running the oracle).
RobustnessReport eval_exact(const Instance& inst, double opt_wc,
                            double opt_avg, const PolicyRunner& policy,
                            std::optional<double> beta = std::nullopt);

struct ExpectedWcEstimate {
  double estimate = 0;    // min over realizations of the Monte-Carlo mean
  double half_width = 0;  // 95% normal-approximation half-width of that mean
  int worst_support_index = -1;
  long max_candidate_evaluations = 0;  // max over all simulated runs
};

// Monte-Carlo estimate of the expected worst-case utility of the sampled
// worst-case greedy policy: `repetitions` seeded runs per realization
// (repetitions >= 30), derived deterministically from seed_base.
ExpectedWcEstimate eval_expected_wc(const Instance& inst, int k, double eps,
                                    int repetitions,
                                    std::uint64_t seed_base = 1);

}  // namespace adsub

#endif  // ADSUB_ORACLE_HPP_
