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

#include "adsub/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace adsub {

namespace {

// Mutable state of one greedy pass. Policies extend `psi` step by step; the
// realized utility is computed by the caller on the final selected set.
struct Pass {
  PartialRealization psi;
  std::vector<ItemId> selections;
  std::vector<double> step_marginals;
  long candidate_evaluations = 0;
};

// Argmax of the mode's marginal over `candidates` (ascending item order, so
// ties resolve to the lowest id). Returns false when no candidate exists.
bool select_best(const Instance& inst, Pass& pass,
                 const std::vector<ItemId>& candidates, MarginalMode mode,
                 const Environment& env) {
  ItemId best_item = -1;
  double best_value = -std::numeric_limits<double>::infinity();
  for (ItemId e : candidates) {
    const auto mp = inst.marginals(e, pass.psi);
    ++pass.candidate_evaluations;
    const double v = mode == MarginalMode::kWorstCase ? mp.wc : mp.avg;
    if (v > best_value) {
      best_value = v;
      best_item = e;
    }
  }
  if (best_item == -1) return false;
  pass.selections.push_back(best_item);
  pass.step_marginals.push_back(best_value);
  pass.psi = pass.psi.with(best_item, env.reveal(best_item));
  return true;
}

std::vector<ItemId> fresh_items(const Instance& inst, ItemSet within,
                                ItemSet dom) {
  std::vector<ItemId> out;
  for (ItemId e = 0; e < inst.num_items(); ++e) {
    if (within.contains(e) && !dom.contains(e)) out.push_back(e);
  }
  return out;
}

PolicyRun finish_single_pass(const Instance& inst, const Environment& env,
                             Pass&& pass) {
  PolicyRun run;
  run.selections = std::move(pass.selections);
  run.step_marginals = std::move(pass.step_marginals);
  run.final_observation = std::move(pass.psi);
  run.selected_set = ItemSet::from_items(run.selections);
  run.candidate_evaluations = pass.candidate_evaluations;
  run.utility = env.support_index() >= 0
                    ? inst.f(run.selected_set, env.support_index())
                    : inst.f(run.selected_set, env.realization());
  return run;
}

int floor_budget(double q, int k) {
  return static_cast<int>(std::floor(q * k));
}
int ceil_budget(double q, int k) {
  return static_cast<int>(std::ceil((1.0 - q) * k));
}

void check_q(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    fail(ErrorCode::kValidation, "q must lie in [0, 1]");
  }
}

// Shared block loop of the matroid greedy passes. `excluded` removes items
// from the candidate pool (the hybrid's optional repeat avoidance).
void run_matroid_pass(const Instance& inst, const ConstraintSystem& matroid,
                      MarginalMode mode, double q, const Environment& env,
                      Pass& pass, ItemSet excluded = ItemSet{}) {
  const auto& blocks = matroid.blocks();
  const auto& limits = matroid.limits();
  for (std::size_t z = 0; z < blocks.size(); ++z) {
    const int budget = mode == MarginalMode::kWorstCase
                           ? floor_budget(q, limits[z])
                           : ceil_budget(q, limits[z]);
    const ItemSet block = ItemSet::from_items(blocks[z]);
    for (int t = 0; t < budget; ++t) {
      const auto candidates =
          fresh_items(inst, block, pass.psi.domain().united(excluded));
      if (candidates.empty()) break;  // block exhausted
      select_best(inst, pass, candidates, mode, env);
    }
  }
}

}  // namespace

PolicyRun run_wc_greedy_psystem(const Instance& inst,
                                const ConstraintSystem& constraint,
                                const Environment& env) {
  Pass pass;
  while (true) {
    const auto candidates = constraint.feasible_extensions(pass.psi.domain());
    if (candidates.empty()) break;
    select_best(inst, pass, candidates, MarginalMode::kWorstCase, env);
  }
  return finish_single_pass(inst, env, std::move(pass));
}

PolicyRun run_wc_greedy_cardinality(const Instance& inst, int k, int budget,
                                    const Environment& env) {
  if (budget < 0 || budget > k || k > inst.num_items()) {
    fail(ErrorCode::kValidation,
         "require 0 <= budget <= k <= n, got budget=" +
             std::to_string(budget) + " k=" + std::to_string(k));
  }
  Pass pass;
  for (int t = 0; t < budget; ++t) {
    const auto candidates =
        fresh_items(inst, inst.ground_set(), pass.psi.domain());
    select_best(inst, pass, candidates, MarginalMode::kWorstCase, env);
  }
  return finish_single_pass(inst, env, std::move(pass));
}

PolicyRun run_stochastic_wc_greedy(const Instance& inst, int k, double eps,
                                   const Environment& env, SeededRng& rng) {
  if (!(eps > 0.0 && eps < 1.0)) {
    fail(ErrorCode::kInvalidEps, "eps must lie in (0, 1)");
  }
  if (k < 0 || k > inst.num_items()) {
    fail(ErrorCode::kValidation, "require 0 <= k <= n");
  }
  const int n = inst.num_items();
  const int sample_size = std::min(
      n, static_cast<int>(std::ceil(static_cast<double>(n) / k *
                                    std::log(1.0 / eps))));
  Pass pass;
  for (int t = 0; t < k; ++t) {
    const auto sampled = rng.sample_without_replacement(n, sample_size);
    std::vector<ItemId> candidates;
    for (int e : sampled) {
      if (!pass.psi.contains(e)) candidates.push_back(e);
    }
    // All sampled items may already be observed; the round then selects
    // nothing (impossible once |H| = n).
    select_best(inst, pass, candidates, MarginalMode::kWorstCase, env);
  }
  return finish_single_pass(inst, env, std::move(pass));
}

PolicyRun run_avg_greedy(const Instance& inst, int budget,
                         std::optional<ItemSet> restrict,
                         const Environment& env) {
  if (budget < 0) {
    fail(ErrorCode::kValidation, "budget must be non-negative");
  }
  const ItemSet within = restrict.value_or(inst.ground_set());
  Pass pass;
  for (int t = 0; t < budget; ++t) {
    const auto candidates = fresh_items(inst, within, pass.psi.domain());
    if (candidates.empty()) break;
    select_best(inst, pass, candidates, MarginalMode::kAverage, env);
  }
  return finish_single_pass(inst, env, std::move(pass));
}

namespace {

// Combines a completed worst-case pass and a fresh-start average pass into
// one run scored on the union of selections.
PolicyRun finish_concatenation(const Instance& inst, const Environment& env,
                               Pass&& wc_pass, Pass&& avg_pass) {
  PolicyRun run;
  run.selections = std::move(wc_pass.selections);
  run.selections.insert(run.selections.end(), avg_pass.selections.begin(),
                        avg_pass.selections.end());
  run.step_marginals = std::move(wc_pass.step_marginals);
  run.step_marginals.insert(run.step_marginals.end(),
                            avg_pass.step_marginals.begin(),
                            avg_pass.step_marginals.end());
  run.final_observation = wc_pass.psi.merged_with(avg_pass.psi);
  run.selected_set = ItemSet::from_items(run.selections);
  run.candidate_evaluations =
      wc_pass.candidate_evaluations + avg_pass.candidate_evaluations;
  run.utility = env.support_index() >= 0
                    ? inst.f(run.selected_set, env.support_index())
                    : inst.f(run.selected_set, env.realization());
  return run;
}

}  // namespace

PolicyRun run_hybrid_cardinality(const Instance& inst, int k,
                                 const Environment& env, double q,
                                 bool exclude_repeats) {
  if (k < 1 || k > inst.num_items()) {
    fail(ErrorCode::kValidation, "require 1 <= k <= n");
  }
  check_q(q);
  Pass wc_pass;
  const int wc_budget = floor_budget(q, k);
  for (int t = 0; t < wc_budget; ++t) {
    const auto candidates =
        fresh_items(inst, inst.ground_set(), wc_pass.psi.domain());
    select_best(inst, wc_pass, candidates, MarginalMode::kWorstCase, env);
  }
  const ItemSet excluded =
      exclude_repeats ? ItemSet::from_items(wc_pass.selections) : ItemSet{};
  Pass avg_pass;  // empty start: phase-1 observations are ignored
  const int avg_budget = ceil_budget(q, k);
  for (int t = 0; t < avg_budget; ++t) {
    const auto candidates = fresh_items(
        inst, inst.ground_set(), avg_pass.psi.domain().united(excluded));
    if (candidates.empty()) break;
    select_best(inst, avg_pass, candidates, MarginalMode::kAverage, env);
  }
  return finish_concatenation(inst, env, std::move(wc_pass),
                              std::move(avg_pass));
}

PolicyRun run_matroid_greedy(const Instance& inst,
                             const ConstraintSystem& matroid,
                             MarginalMode mode, double q,
                             const Environment& env) {
  if (matroid.kind() != ConstraintSystem::Kind::kPartitionMatroid) {
    fail(ErrorCode::kValidation, "constraint is not a partition matroid");
  }
  check_q(q);
  Pass pass;
  run_matroid_pass(inst, matroid, mode, q, env, pass);
  return finish_single_pass(inst, env, std::move(pass));
}

PolicyRun run_hybrid_matroid(const Instance& inst,
                             const ConstraintSystem& matroid,
                             const Environment& env, double q,
                             bool exclude_repeats) {
  if (matroid.kind() != ConstraintSystem::Kind::kPartitionMatroid) {
    fail(ErrorCode::kValidation, "constraint is not a partition matroid");
  }
  check_q(q);
  Pass wc_pass;
  run_matroid_pass(inst, matroid, MarginalMode::kWorstCase, q, env, wc_pass);
  const ItemSet excluded =
      exclude_repeats ? ItemSet::from_items(wc_pass.selections) : ItemSet{};
  Pass avg_pass;  // empty start
  run_matroid_pass(inst, matroid, MarginalMode::kAverage, q, env, avg_pass,
                   excluded);
  return finish_concatenation(inst, env, std::move(wc_pass),
                              std::move(avg_pass));
}

double optimal_q_cardinality(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    fail(ErrorCode::kInvalidBeta, "beta must lie in (0, 1)");
  }
  const double a = 2.0 * beta - 1.0;
  const double root = std::sqrt(a * a + 4.0 * beta * (1.0 - beta) / std::exp(1.0));
  return -std::log((a + root) / (2.0 * beta));
}

double optimal_q_matroid(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    fail(ErrorCode::kInvalidBeta, "beta must lie in (0, 1)");
  }
  return (1.0 - beta) / (beta + std::sqrt(3.0 * beta * beta - 3.0 * beta + 1.0));
}

}  // namespace adsub
