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

#ifndef ADSUB_MODEL_HPP_
#define ADSUB_MODEL_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "adsub/types.hpp"

namespace adsub {

struct WeightedRealization {
  Realization realization;
  double prob = 0;
};

// f(S, phi) evaluator. `support_index` identifies phi within the owning
// instance's prior when phi is a support member (>= 0), -1 otherwise.
// Implementations must be deterministic and non-negative.
class UtilityModel {
 public:
  virtual ~UtilityModel() = default;
  virtual double value(ItemSet items, const Realization& phi,
                       int support_index) const = 0;
  // Declares that f(dom(psi), phi) depends only on psi, never on states of
  // unobserved items. Trusted for fast conditional evaluation; the property
  // checkers verify the claim on concrete instances.
  virtual bool claims_minimal_dependency() const = 0;
  virtual std::string kind() const = 0;
  virtual nlohmann::json descriptor_json() const = 0;
};

// Tabular utility: one row per item set, one value per support realization.
// A lookup of an unlisted (set, realization) pair is an error, not zero.
class TableUtility : public UtilityModel {
 public:
  TableUtility(std::map<std::uint64_t, std::vector<double>> rows,
               int support_size, bool claims_minimal_dependency);

  double value(ItemSet items, const Realization& phi,
               int support_index) const override;
  bool claims_minimal_dependency() const override { return claims_md_; }
  std::string kind() const override { return "table"; }
  nlohmann::json descriptor_json() const override;

  const std::map<std::uint64_t, std::vector<double>>& rows() const {
    return rows_;
  }

 private:
  std::map<std::uint64_t, std::vector<double>> rows_;
  int support_size_;
  bool claims_md_;
};

// The complete problem input: ground set size, state alphabet, explicit
// finite-support prior, and the utility model. Immutable after construction
// and safe to share across threads; the internal memo tables are
// synchronized.
class Instance {
 public:
  Instance(int num_states, std::vector<WeightedRealization> support,
           std::shared_ptr<const UtilityModel> utility);
  Instance(Instance&&) noexcept;
  Instance& operator=(Instance&&) noexcept;
  ~Instance();

  int num_items() const { return num_items_; }
  int num_states() const { return num_states_; }
  ItemSet ground_set() const { return ItemSet::full(num_items_); }
  const std::vector<WeightedRealization>& support() const { return support_; }
  const UtilityModel& utility() const { return *utility_; }
  std::shared_ptr<const UtilityModel> utility_ptr() const { return utility_; }

  // f(S, phi) for a support realization, memoized per (S, index).
  double f(ItemSet items, int support_index) const;
  // f(S, phi) for an arbitrary realization (no memoization).
  double f(ItemSet items, const Realization& phi) const;

  // Support indices consistent with psi, ascending. May be empty.
  std::vector<int> consistent_support(const PartialRealization& psi) const;

  // p(phi | psi): consistent support realizations with renormalized
  // probabilities. Errors with kInconsistentObservation if none remain.
  std::vector<std::pair<int, double>> conditional_distribution(
      const PartialRealization& psi) const;

  // O(e, psi): states of e with positive conditional probability, ascending.
  std::vector<StateId> possible_states(ItemId e,
                                       const PartialRealization& psi) const;

  // f(S, psi) = E[f(S, Phi) | Phi ~ psi].
  double f_on_partial(ItemSet items, const PartialRealization& psi) const;

  // Conditional expected marginal utility of e on top of psi.
  double avg_marginal(ItemId e, const PartialRealization& psi) const;
  // Worst-case (over possible states of e) marginal utility on top of psi.
  double wc_marginal(ItemId e, const PartialRealization& psi) const;

  // --- Shared evaluation plumbing used by policies, the exact oracle and
  // --- the property checkers. Values are identical to the public operations
  // --- above; these interfaces avoid re-filtering the support.

  struct NodeData {
    std::vector<int> consistent;  // support indices, ascending
    double mass = 0;              // unnormalized prior mass of `consistent`
    double base = 0;              // f(dom(psi), psi)
  };
  // Cached per-psi data; throws kInconsistentObservation when no support
  // realization is consistent with psi.
  const NodeData& node(const PartialRealization& psi) const;

  struct StateGroup {
    StateId state;
    std::vector<int> support;  // ascending
    double mass = 0;
  };
  // Partition of `consistent` by the state of e, ordered by state.
  std::vector<StateGroup> group_by_state(ItemId e,
                                         std::span<const int> consistent) const;

  // E[f(S, Phi)] over the given support subset, normalized by its mass.
  // `s_is_observed_domain` asserts S is contained in the observation domain
  // that produced `consistent`, enabling the minimal-dependency fast path.
  double conditional_value(ItemSet items, std::span<const int> consistent,
                           bool s_is_observed_domain) const;

  struct MarginalPair {
    double wc = 0;
    double avg = 0;
  };
  // Both marginals of e on top of psi, cached per (psi, e).
  MarginalPair marginals(ItemId e, const PartialRealization& psi) const;

 private:
  // Synchronized memo tables; behind a pointer so instances stay movable.
  struct CacheState;

  int num_items_;
  int num_states_;
  std::vector<WeightedRealization> support_;
  std::shared_ptr<const UtilityModel> utility_;
  std::unique_ptr<CacheState> caches_;
};

}  // namespace adsub

#endif  // ADSUB_MODEL_HPP_
