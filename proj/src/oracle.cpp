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

#include "adsub/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

namespace adsub {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint32_t w : v) {
      h ^= w;
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

enum class Objective { kWorstCase, kAverage };

class BackwardInduction {
 public:
  BackwardInduction(const Instance& inst, const ConstraintSystem& constraint,
                    Objective objective)
      : inst_(inst), constraint_(constraint), objective_(objective) {}

  double value(const PartialRealization& psi) {
    const auto key = psi.packed();
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const Instance::NodeData& nd = inst_.node(psi);
    const double stop_value = stop_value_at(psi, nd);
    double best_continue = -std::numeric_limits<double>::infinity();
    for (ItemId e : constraint_.feasible_extensions(psi.domain())) {
      best_continue = std::max(best_continue, continuation(psi, nd, e));
    }
    const double v = std::max(stop_value, best_continue);
    memo_.emplace(key, v);
    return v;
  }

  // Rebuilds the optimal plan from the filled memo table, repeating the same
  // comparisons; stopping is preferred on exact ties, then the lowest item.
  std::unique_ptr<DecisionTreeNode> build_tree(const PartialRealization& psi) {
    auto node = std::make_unique<DecisionTreeNode>();
    const Instance::NodeData& nd = inst_.node(psi);
    const double stop_value = stop_value_at(psi, nd);
    ItemId best_item = -1;
    double best_continue = -std::numeric_limits<double>::infinity();
    for (ItemId e : constraint_.feasible_extensions(psi.domain())) {
      const double v = continuation(psi, nd, e);
      if (v > best_continue) {
        best_continue = v;
        best_item = e;
      }
    }
    if (best_item == -1 || stop_value >= best_continue) {
      node->item = -1;
      node->value = stop_value;
      return node;
    }
    node->item = best_item;
    node->value = best_continue;
    for (const auto& g : inst_.group_by_state(best_item, nd.consistent)) {
      node->children.emplace(g.state,
                             build_tree(psi.with(best_item, g.state)));
    }
    return node;
  }

 private:
  double stop_value_at(const PartialRealization& psi,
                       const Instance::NodeData& nd) {
    if (objective_ == Objective::kAverage) return nd.base;
    double worst = std::numeric_limits<double>::infinity();
    for (int i : nd.consistent) {
      worst = std::min(worst, inst_.f(psi.domain(), i));
    }
    return worst;
  }

  double continuation(const PartialRealization& psi,
                      const Instance::NodeData& nd, ItemId e) {
    if (objective_ == Objective::kWorstCase) {
      double v = std::numeric_limits<double>::infinity();
      for (const auto& g : inst_.group_by_state(e, nd.consistent)) {
        v = std::min(v, value(psi.with(e, g.state)));
      }
      return v;
    }
    double v = 0;
    for (const auto& g : inst_.group_by_state(e, nd.consistent)) {
      v += (g.mass / nd.mass) * value(psi.with(e, g.state));
    }
    return v;
  }

  const Instance& inst_;
  const ConstraintSystem& constraint_;
  Objective objective_;
  std::unordered_map<std::vector<std::uint32_t>, double, VecHash> memo_;
};

// Upper bound on total branching over reachable observations, computed
// before the search: at depth t there are at most C(n,t) domains, each with
// at most min(|O|^t, |support|) distinct observations, branching into at
// most (n-t)*|O| children.
double estimate_search_work(const Instance& inst,
                            const ConstraintSystem& constraint) {
  const int n = inst.num_items();
  const int depth = std::min(constraint.max_independent_size(), n);
  const double states = inst.num_states();
  const double support = static_cast<double>(inst.support().size());
  double total = 0;
  double choose = 1;      // C(n, t)
  double state_pow = 1;   // |O|^t, saturating
  for (int t = 0; t <= depth; ++t) {
    total += choose * std::min(state_pow, support) * (n - t) * states;
    if (total > 1e18) return total;
    choose = choose * (n - t) / (t + 1);
    state_pow = std::min(state_pow * states, support + 1);
  }
  return total;
}

OracleResult optimize(const Instance& inst, const ConstraintSystem& constraint,
                      Objective objective, double work_cap) {
  if (inst.support().size() > 64) {
    fail(ErrorCode::kSearchSpaceTooLarge,
         "exact oracle requires a support of at most 64 realizations, got " +
             std::to_string(inst.support().size()));
  }
  const double estimate = estimate_search_work(inst, constraint);
  if (estimate > work_cap) {
    fail(ErrorCode::kSearchSpaceTooLarge,
         "estimated search work " + std::to_string(estimate) +
             " exceeds cap " + std::to_string(work_cap));
  }
  BackwardInduction search(inst, constraint, objective);
  OracleResult result;
  result.value = search.value(PartialRealization{});
  result.tree = search.build_tree(PartialRealization{});
  return result;
}

}  // namespace

OracleResult opt_worst_case(const Instance& inst,
                            const ConstraintSystem& constraint,
                            double work_cap) {
  return optimize(inst, constraint, Objective::kWorstCase, work_cap);
}

OracleResult opt_average_case(const Instance& inst,
                              const ConstraintSystem& constraint,
                              double work_cap) {
  return optimize(inst, constraint, Objective::kAverage, work_cap);
}

PolicyRun run_decision_tree(const Instance& inst, const DecisionTreeNode& tree,
                            const Environment& env) {
  PolicyRun run;
  const DecisionTreeNode* node = &tree;
  PartialRealization psi;
  while (!node->stops()) {
    const ItemId e = node->item;
    const StateId o = env.reveal(e);
    run.selections.push_back(e);
    run.step_marginals.push_back(0);  // trees do not record marginals
    psi = psi.with(e, o);
    auto it = node->children.find(o);
    if (it == node->children.end()) {
      fail(ErrorCode::kInconsistentObservation,
           "decision tree has no branch for the revealed state");
    }
    node = it->second.get();
  }
  run.final_observation = psi;
  run.selected_set = ItemSet::from_items(run.selections);
  run.utility = env.support_index() >= 0
                    ? inst.f(run.selected_set, env.support_index())
                    : inst.f(run.selected_set, env.realization());
  return run;
}

namespace {

RobustnessReport eval_against_optima(const Instance& inst, double opt_wc,
                                     double opt_avg,
                                     const PolicyRunner& policy,
                                     std::optional<double> beta) {
  RobustnessReport report;
  report.opt_wc = opt_wc;
  report.opt_avg = opt_avg;
  report.f_wc = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < inst.support().size(); ++i) {
    const Environment env = environment_for(inst, static_cast<int>(i));
    const PolicyRun run = policy(env);
    report.f_wc = std::min(report.f_wc, run.utility);
    report.f_avg += inst.support()[i].prob * run.utility;
  }
  if (report.opt_wc > 0) report.wc_ratio = report.f_wc / report.opt_wc;
  if (report.opt_avg > 0) report.avg_ratio = report.f_avg / report.opt_avg;
  if (report.wc_ratio && report.avg_ratio) {
    report.alpha = std::min(*report.wc_ratio, *report.avg_ratio);
  }
  if (beta) {
    if (!(*beta > 0.0 && *beta < 1.0)) {
      fail(ErrorCode::kInvalidBeta, "beta must lie in (0, 1)");
    }
    report.beta = beta;
    if (report.wc_ratio && report.avg_ratio) {
      report.alpha_beta = std::min(*beta * *report.wc_ratio,
                                   (1.0 - *beta) * *report.avg_ratio);
    }
  }
  return report;
}

}  // namespace

RobustnessReport eval_exact(const Instance& inst,
                            const ConstraintSystem& constraint,
                            const PolicyRunner& policy,
                            std::optional<double> beta) {
  const OracleResult wc = opt_worst_case(inst, constraint);
  const OracleResult avg = opt_average_case(inst, constraint);
  return eval_against_optima(inst, wc.value, avg.value, policy, beta);
}

RobustnessReport eval_exact(const Instance& inst, double opt_wc,
                            double opt_avg, const PolicyRunner& policy,
                            std::optional<double> beta) {
  return eval_against_optima(inst, opt_wc, opt_avg, policy, beta);
}

ExpectedWcEstimate eval_expected_wc(const Instance& inst, int k, double eps,
                                    int repetitions, std::uint64_t seed_base) {
  if (repetitions < 30) {
    fail(ErrorCode::kValidation, "need at least 30 repetitions");
  }
  ExpectedWcEstimate out;
  out.estimate = std::numeric_limits<double>::infinity();
  std::vector<double> utilities(static_cast<std::size_t>(repetitions));
  for (std::size_t i = 0; i < inst.support().size(); ++i) {
    const Environment env = environment_for(inst, static_cast<int>(i));
    double sum = 0;
    for (int r = 0; r < repetitions; ++r) {
      SeededRng rng(SeededRng::mix(seed_base, i * 1000003ULL +
                                                  static_cast<std::uint64_t>(r)));
      const PolicyRun run = run_stochastic_wc_greedy(inst, k, eps, env, rng);
      utilities[static_cast<std::size_t>(r)] = run.utility;
      sum += run.utility;
      out.max_candidate_evaluations =
          std::max(out.max_candidate_evaluations, run.candidate_evaluations);
    }
    // A constant sample (e.g. eps so small that every round sees the whole
    // ground set) has an exact mean and zero width.
    const bool constant = std::all_of(
        utilities.begin(), utilities.end(),
        [&utilities](double u) { return u == utilities.front(); });
    const double mean = constant ? utilities.front() : sum / repetitions;
    if (mean < out.estimate) {
      out.estimate = mean;
      out.worst_support_index = static_cast<int>(i);
      double squared_deviations = 0;
      for (double u : utilities) {
        squared_deviations += (u - mean) * (u - mean);
      }
      const double var = squared_deviations / (repetitions - 1);
      out.half_width = 1.96 * std::sqrt(var / repetitions);
    }
  }
  return out;
}

}  // namespace adsub
