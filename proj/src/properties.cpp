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

#include "adsub/properties.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace adsub {

namespace {

// Subsets of {0..n-1} ordered by (size, mask value); for equal sizes the
// smaller mask lists lexicographically earlier items.
std::vector<std::uint64_t> subsets_by_size(int n) {
  std::vector<std::uint64_t> masks;
  masks.reserve(std::size_t{1} << n);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    masks.push_back(m);
  }
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint64_t a, std::uint64_t b) {
                     const int sa = std::popcount(a);
                     const int sb = std::popcount(b);
                     return sa != sb ? sa < sb : a < b;
                   });
  return masks;
}

std::vector<std::uint64_t> submasks_by_size(std::uint64_t mask) {
  std::vector<std::uint64_t> subs;
  std::uint64_t s = mask;
  while (true) {
    subs.push_back(s);
    if (s == 0) break;
    s = (s - 1) & mask;
  }
  std::stable_sort(subs.begin(), subs.end(),
                   [](std::uint64_t a, std::uint64_t b) {
                     const int sa = std::popcount(a);
                     const int sb = std::popcount(b);
                     return sa != sb ? sa < sb : a < b;
                   });
  return subs;
}

}  // namespace

std::vector<PartialRealization> enumerate_reachable(const Instance& inst,
                                                    long cap) {
  std::vector<PartialRealization> out;
  for (std::uint64_t mask : subsets_by_size(inst.num_items())) {
    const ItemSet domain{mask};
    const auto items = domain.items();
    std::set<std::vector<StateId>> seen;
    for (const auto& wr : inst.support()) {
      std::vector<StateId> states;
      states.reserve(items.size());
      for (ItemId e : items) states.push_back(wr.realization.at(e));
      seen.insert(std::move(states));
    }
    for (const auto& states : seen) {
      std::vector<std::pair<ItemId, StateId>> obs;
      for (std::size_t i = 0; i < items.size(); ++i) {
        obs.emplace_back(items[i], states[i]);
      }
      out.push_back(PartialRealization::from_pairs(std::move(obs)));
      if (static_cast<long>(out.size()) > cap) {
        fail(ErrorCode::kSearchSpaceTooLarge,
             "reachable observation count exceeds cap " + std::to_string(cap));
      }
    }
  }
  return out;
}

namespace {

using MarginalOf = double (Instance::*)(ItemId, const PartialRealization&) const;

// Shared sweep for the two submodularity checkers: for every reachable
// psi' and every subrealization psi, marginals at psi must dominate
// marginals at psi' for every item outside dom(psi').
PropertyReport sweep_submodular(const Instance& inst, MarginalOf marginal,
                                const std::string& name,
                                const CheckOptions& opts) {
  PropertyReport report;
  report.property = name;
  const auto reachable = enumerate_reachable(inst, opts.sweep_cap);
  for (const auto& psi_prime : reachable) {
    const auto subs = submasks_by_size(psi_prime.domain().mask());
    for (std::uint64_t sub : subs) {
      if (sub == psi_prime.domain().mask()) continue;  // psi == psi' is vacuous
      const PartialRealization psi = psi_prime.restricted_to(ItemSet{sub});
      for (ItemId e = 0; e < inst.num_items(); ++e) {
        if (psi_prime.contains(e)) continue;
        if (++report.checked > opts.sweep_cap) {
          fail(ErrorCode::kSearchSpaceTooLarge,
               "checked pair count exceeds cap " +
                   std::to_string(opts.sweep_cap));
        }
        const double lhs = (inst.*marginal)(e, psi);
        const double rhs = (inst.*marginal)(e, psi_prime);
        if (lhs < rhs - opts.tol) {
          report.pass = false;
          PropertyWitness w;
          w.psi = psi;
          w.psi_prime = psi_prime;
          w.item = e;
          w.lhs = lhs;
          w.rhs = rhs;
          w.note = "marginal grows from " + std::to_string(lhs) + " to " +
                   std::to_string(rhs);
          report.witness = std::move(w);
          return report;
        }
      }
    }
  }
  return report;
}

PropertyReport sweep_monotone(const Instance& inst, MarginalOf marginal,
                              const std::string& name,
                              const CheckOptions& opts) {
  PropertyReport report;
  report.property = name;
  for (const auto& psi : enumerate_reachable(inst, opts.sweep_cap)) {
    for (ItemId e = 0; e < inst.num_items(); ++e) {
      if (psi.contains(e)) continue;
      ++report.checked;
      const double m = (inst.*marginal)(e, psi);
      if (m < -opts.tol) {
        report.pass = false;
        PropertyWitness w;
        w.psi = psi;
        w.item = e;
        w.lhs = m;
        w.rhs = 0;
        w.note = "negative marginal " + std::to_string(m);
        report.witness = std::move(w);
        return report;
      }
    }
  }
  return report;
}

}  // namespace

PropertyReport check_wc_submodular(const Instance& inst,
                                   const CheckOptions& opts) {
  return sweep_submodular(inst, &Instance::wc_marginal, "wc-submodular", opts);
}

PropertyReport check_adaptive_submodular(const Instance& inst,
                                         const CheckOptions& opts) {
  return sweep_submodular(inst, &Instance::avg_marginal, "adaptive-submodular",
                          opts);
}

PropertyReport check_wc_monotone(const Instance& inst,
                                 const CheckOptions& opts) {
  return sweep_monotone(inst, &Instance::wc_marginal, "wc-monotone", opts);
}

PropertyReport check_adaptive_monotone(const Instance& inst,
                                       const CheckOptions& opts) {
  return sweep_monotone(inst, &Instance::avg_marginal, "adaptive-monotone",
                        opts);
}

PropertyReport check_pointwise(const Instance& inst,
                               const CheckOptions& opts) {
  PropertyReport report;
  report.property = "pointwise";
  const int n = inst.num_items();
  const auto masks = subsets_by_size(n);
  for (int idx = 0; idx < static_cast<int>(inst.support().size()); ++idx) {
    // Monotonicity: adding any item never decreases f(., phi).
    for (std::uint64_t m : masks) {
      const ItemSet s{m};
      for (ItemId e = 0; e < n; ++e) {
        if (s.contains(e)) continue;
        if (++report.checked > opts.sweep_cap) {
          fail(ErrorCode::kSearchSpaceTooLarge, "pointwise sweep exceeds cap");
        }
        const double lo = inst.f(s, idx);
        const double hi = inst.f(s.with(e), idx);
        if (hi < lo - opts.tol) {
          report.pass = false;
          PropertyWitness w;
          w.realization_index = idx;
          w.set_small = s.items();
          w.item = e;
          w.lhs = hi;
          w.rhs = lo;
          w.note = "f decreases when adding an item";
          report.witness = std::move(w);
          return report;
        }
      }
    }
    // Submodularity: marginals shrink on supersets.
    for (std::uint64_t large : masks) {
      const ItemSet s_large{large};
      for (std::uint64_t small : submasks_by_size(large)) {
        const ItemSet s_small{small};
        for (ItemId e = 0; e < n; ++e) {
          if (s_large.contains(e)) continue;
          if (++report.checked > opts.sweep_cap) {
            fail(ErrorCode::kSearchSpaceTooLarge,
                 "pointwise sweep exceeds cap");
          }
          const double gain_small =
              inst.f(s_small.with(e), idx) - inst.f(s_small, idx);
          const double gain_large =
              inst.f(s_large.with(e), idx) - inst.f(s_large, idx);
          if (gain_small < gain_large - opts.tol) {
            report.pass = false;
            PropertyWitness w;
            w.realization_index = idx;
            w.set_small = s_small.items();
            w.set_large = s_large.items();
            w.item = e;
            w.lhs = gain_small;
            w.rhs = gain_large;
            w.note = "marginal gain grows with the base set";
            report.witness = std::move(w);
            return report;
          }
        }
      }
    }
  }
  return report;
}

PropertyReport check_minimal_dependency(const Instance& inst,
                                        const CheckOptions& opts) {
  PropertyReport report;
  report.property = "minimal-dependency";
  for (const auto& psi : enumerate_reachable(inst, opts.sweep_cap)) {
    const auto consistent = inst.consistent_support(psi);
    const double reference = inst.f(psi.domain(), consistent.front());
    for (int i : consistent) {
      ++report.checked;
      const double v = inst.f(psi.domain(), i);
      if (std::abs(v - reference) > opts.tol) {
        report.pass = false;
        PropertyWitness w;
        w.psi = psi;
        w.realization_index = i;
        w.lhs = v;
        w.rhs = reference;
        w.note = "f(dom(psi), phi) differs across consistent realizations";
        report.witness = std::move(w);
        return report;
      }
    }
  }
  return report;
}

PropertyReport check_state_set_stability(const Instance& inst,
                                         const CheckOptions& opts) {
  PropertyReport report;
  report.property = "state-set-stability";
  const PartialRealization empty;
  for (const auto& psi : enumerate_reachable(inst, opts.sweep_cap)) {
    for (ItemId e = 0; e < inst.num_items(); ++e) {
      if (psi.contains(e)) continue;
      ++report.checked;
      const auto conditioned = inst.possible_states(e, psi);
      const auto unconditioned = inst.possible_states(e, empty);
      if (conditioned != unconditioned) {
        report.pass = false;
        PropertyWitness w;
        w.psi = psi;
        w.item = e;
        w.lhs = static_cast<double>(conditioned.size());
        w.rhs = static_cast<double>(unconditioned.size());
        w.note = "possible state set changes with the observation";
        report.witness = std::move(w);
        return report;
      }
    }
  }
  return report;
}

PropertyReport check_sufficient_conditions(const Instance& inst,
                                           const CheckOptions& opts) {
  PropertyReport report;
  report.property = "sufficient-conditions";
  const PropertyReport premises[] = {
      check_state_set_stability(inst, opts),
      check_pointwise(inst, opts),
      check_minimal_dependency(inst, opts),
  };
  for (const auto& premise : premises) {
    report.checked += premise.checked;
    if (!premise.pass) {
      // Premise fails: the implication holds vacuously.
      PropertyWitness w;
      w.note = "vacuous: premise '" + premise.property + "' fails";
      report.witness = std::move(w);
      return report;
    }
  }
  for (PropertyReport conclusion :
       {check_wc_monotone(inst, opts), check_wc_submodular(inst, opts)}) {
    report.checked += conclusion.checked;
    if (!conclusion.pass) {
      report.pass = false;
      report.witness = std::move(conclusion.witness);
      report.witness->note =
          "premises hold but '" + conclusion.property + "' fails";
      return report;
    }
  }
  return report;
}

const std::vector<std::string>& all_property_names() {
  static const std::vector<std::string> names = {
      "wc-submodular",       "wc-monotone",
      "adaptive-submodular", "adaptive-monotone",
      "pointwise",           "minimal-dependency",
      "state-set-stability", "sufficient-conditions",
  };
  return names;
}

PropertyReport run_property_check(const Instance& inst,
                                  const std::string& name,
                                  const CheckOptions& opts) {
  if (name == "wc-submodular") return check_wc_submodular(inst, opts);
  if (name == "wc-monotone") return check_wc_monotone(inst, opts);
  if (name == "adaptive-submodular")
    return check_adaptive_submodular(inst, opts);
  if (name == "adaptive-monotone") return check_adaptive_monotone(inst, opts);
  if (name == "pointwise") return check_pointwise(inst, opts);
  if (name == "minimal-dependency")
    return check_minimal_dependency(inst, opts);
  if (name == "state-set-stability")
    return check_state_set_stability(inst, opts);
  if (name == "sufficient-conditions")
    return check_sufficient_conditions(inst, opts);
  fail(ErrorCode::kValidation, "unknown property: " + name);
}

}  // namespace adsub
