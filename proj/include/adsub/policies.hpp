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

#ifndef ADSUB_POLICIES_HPP_
#define ADSUB_POLICIES_HPP_

#include <optional>

#include "adsub/constraints.hpp"
#include "adsub/model.hpp"
#include "adsub/rng.hpp"

namespace adsub {

// Holds the true realization, hidden from the policy. reveal() answers from
// the one fixed realization for the whole run.
class Environment {
 public:
  Environment(const Realization& phi, int support_index)
      : phi_(&phi), support_index_(support_index) {}

  StateId reveal(ItemId e) const { return phi_->at(e); }
  const Realization& realization() const { return *phi_; }
  int support_index() const { return support_index_; }

 private:
  const Realization* phi_;
  int support_index_;
};

inline Environment environment_for(const Instance& inst, int support_index) {
  return Environment(
      inst.support()[static_cast<std::size_t>(support_index)].realization,
      support_index);
}

// One policy trajectory against one realization. Hybrid policies may list an
// item twice (once per phase); selected_set is the union actually scored.
struct PolicyRun {
  std::vector<ItemId> selections;
  std::vector<double> step_marginals;
  PartialRealization final_observation;
  ItemSet selected_set;
  double utility = 0;
  long candidate_evaluations = 0;
};

enum class MarginalMode { kWorstCase, kAverage };

// Greedy by worst-case marginal, feasibility-driven: loops while any single
// item can extend the current domain within the independence system.
PolicyRun run_wc_greedy_psystem(const Instance& inst,
                                const ConstraintSystem& constraint,
                                const Environment& env);

// Greedy by worst-case marginal under a cardinality constraint. `budget`
// realizes level-t truncation: exactly `budget` selections over all of E,
// 0 <= budget <= k <= n.
PolicyRun run_wc_greedy_cardinality(const Instance& inst, int k, int budget,
                                    const Environment& env);

// Each round samples a set H of size min(n, ceil((n/k) ln(1/eps))) without
// replacement and picks the best worst-case marginal within H. eps in (0,1).
PolicyRun run_stochastic_wc_greedy(const Instance& inst, int k, double eps,
                                   const Environment& env, SeededRng& rng);

// Greedy by conditional expected marginal, `budget` selections within
// `restrict` (defaults to the whole ground set).
PolicyRun run_avg_greedy(const Instance& inst, int budget,
                         std::optional<ItemSet> restrict,
                         const Environment& env);

// Two phases against the same environment: worst-case greedy for
// floor(q*k) picks, then average-case greedy for ceil((1-q)*k) picks started
// from an empty observation (phase-2 marginals ignore phase-1 observations,
// but reveals still return the true states). Scored on the union of both
// phases' selections; repeated items waste a slot unless exclude_repeats
// removes phase-1 items from the phase-2 candidate pool. q=0.5 is the
// unweighted hybrid.
PolicyRun run_hybrid_cardinality(const Instance& inst, int k,
                                 const Environment& env, double q = 0.5,
                                 bool exclude_repeats = false);

// Block-by-block greedy for a partition matroid: in ascending block order,
// block z takes floor(q*k_z) picks (worst-case mode) or ceil((1-q)*k_z)
// picks (average mode) within E_z. Observations accumulate across blocks.
PolicyRun run_matroid_greedy(const Instance& inst,
                             const ConstraintSystem& matroid,
                             MarginalMode mode, double q,
                             const Environment& env);

// Worst-case matroid pass, then an average-case matroid pass restarted from
// an empty observation; union semantics as in run_hybrid_cardinality.
PolicyRun run_hybrid_matroid(const Instance& inst,
                             const ConstraintSystem& matroid,
                             const Environment& env, double q = 0.5,
                             bool exclude_repeats = false);

// Closed-form q maximizing min{beta(1-e^-q), (1-beta)(1-e^-(1-q))} for the
// weighted hybrid under a cardinality constraint (large-k form).
double optimal_q_cardinality(double beta);

// Closed-form q maximizing min{beta/(1+1/q), (1-beta)/(1+1/(1-q))} for the
// weighted hybrid under partition matroids (large-k form).
double optimal_q_matroid(double beta);

}  // namespace adsub

#endif  // ADSUB_POLICIES_HPP_
