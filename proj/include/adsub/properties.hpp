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

#ifndef ADSUB_PROPERTIES_HPP_
#define ADSUB_PROPERTIES_HPP_

#include <optional>
#include <string>
#include <vector>

#include "adsub/model.hpp"

namespace adsub {

// Exhaustive structural checkers. Sweeps run over the reachable partial
// realizations: those consistent with at least one support realization,
// enumerated in a fixed order (domain size, then items, then states) so the
// first witness is run-independent. Checkers refuse oversized sweeps rather
// than subsample.

struct PropertyWitness {
  PartialRealization psi;
  std::optional<PartialRealization> psi_prime;
  std::optional<ItemId> item;
  std::optional<int> realization_index;
  std::optional<std::vector<ItemId>> set_small;
  std::optional<std::vector<ItemId>> set_large;
  double lhs = 0;
  double rhs = 0;
  std::string note;
};

struct PropertyReport {
  std::string property;
  bool pass = true;
  long checked = 0;
  std::optional<PropertyWitness> witness;
};

struct CheckOptions {
  double tol = 1e-9;
  long sweep_cap = 1'000'000;
};

// All consistent partial realizations, ordered by (domain size, domain,
// states). Errors with kSearchSpaceTooLarge beyond `cap`.
std::vector<PartialRealization> enumerate_reachable(const Instance& inst,
                                                    long cap);

// wc marginals never increase as the observation grows.
PropertyReport check_wc_submodular(const Instance& inst,
                                   const CheckOptions& opts = {});
// wc marginals are non-negative everywhere.
PropertyReport check_wc_monotone(const Instance& inst,
                                 const CheckOptions& opts = {});
// Same quantifier structure with conditional expected marginals.
PropertyReport check_adaptive_submodular(const Instance& inst,
                                         const CheckOptions& opts = {});
PropertyReport check_adaptive_monotone(const Instance& inst,
                                       const CheckOptions& opts = {});
// f(., phi) is submodular and monotone for every support realization.
PropertyReport check_pointwise(const Instance& inst,
                               const CheckOptions& opts = {});
// f(dom(psi), phi) agrees across all realizations consistent with psi.
PropertyReport check_minimal_dependency(const Instance& inst,
                                        const CheckOptions& opts = {});
// O(e, psi) = O(e, empty) for every reachable psi and unobserved e.
PropertyReport check_state_set_stability(const Instance& inst,
                                         const CheckOptions& opts = {});
// Composite: state-set stability + pointwise + minimal dependency together
// must imply wc monotonicity and wc submodularity. Vacuously passes when a
// premise fails.
PropertyReport check_sufficient_conditions(const Instance& inst,
                                           const CheckOptions& opts = {});

// Dispatch by CLI name ("wc-submodular", "wc-monotone",
// "adaptive-submodular", "adaptive-monotone", "pointwise",
// "minimal-dependency", "state-set-stability", "sufficient-conditions").
PropertyReport run_property_check(const Instance& inst,
                                  const std::string& name,
                                  const CheckOptions& opts = {});
const std::vector<std::string>& all_property_names();

}  // namespace adsub

#endif  // ADSUB_PROPERTIES_HPP_
