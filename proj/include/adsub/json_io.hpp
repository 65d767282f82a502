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

#ifndef ADSUB_JSON_IO_HPP_
#define ADSUB_JSON_IO_HPP_

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "adsub/applications.hpp"
#include "adsub/constraints.hpp"
#include "adsub/model.hpp"
#include "adsub/oracle.hpp"
#include "adsub/policies.hpp"
#include "adsub/properties.hpp"

namespace adsub {

// Instance files carry version "asm-1": ground set size, state alphabet,
// explicit prior, and a utility descriptor (tabular or one of the
// application forms).
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j,
                            int support_cap = kDefaultSupportCap);

// {"type":"cardinality","k":..} | {"type":"partition","blocks":..,
// "limits":..} | {"type":"explicit","independent_sets":..,"p":..}
ConstraintSystem constraint_from_json(const nlohmann::json& j, int num_items);
nlohmann::json constraint_to_json(const ConstraintSystem& c);

// Policy descriptor for the CLI. When beta is given and q is not, q defaults
// to the matching closed-form optimum.
struct PolicySpec {
  std::string policy;  // wc-psystem | wc-card | stoch-wc | avg | hybrid-card
                       // | matroid-wc | matroid-avg | hybrid-matroid
  std::optional<int> k;
  std::optional<int> budget;
  std::optional<double> eps;
  std::optional<double> q;
  std::optional<double> beta;
  std::optional<std::uint64_t> seed;
  bool hybrid_exclude_repeats = false;
};
PolicySpec policy_from_json(const nlohmann::json& j);

// Binds a descriptor to an instance and constraint. The returned runner is
// deterministic per environment (stochastic policies reuse their configured
// seed on every environment).
PolicyRunner make_runner(const Instance& inst, const ConstraintSystem& c,
                         const PolicySpec& spec);
// The q actually used by a (possibly beta-parameterized) hybrid descriptor.
double effective_q(const PolicySpec& spec);

nlohmann::json run_to_json(const PolicyRun& run);
nlohmann::json report_to_json(const RobustnessReport& report);
nlohmann::json property_report_to_json(const PropertyReport& report);
nlohmann::json tree_to_json(const DecisionTreeNode& node);

// Generator descriptors for `gen`:
//   {"type":"counterexample","epsilon":0.1}
//   {"type":"active-learning-random","hypotheses":H,
//    "label_groups":[[count,labels],...]}  (or "points"+"labels")
//   {"type":"viral-random","nodes":N,"uncertain_edges":U,
//    "deterministic_edges":D}
//   {"type":"coverage-random","items":I,"universe":M,"subsets_per_item":S}
//   {"type":"sensors-random","sensors":N,"locations":L}
Instance generate_instance(const nlohmann::json& descriptor,
                           std::uint64_t seed,
                           int support_cap = kDefaultSupportCap);

}  // namespace adsub

#endif  // ADSUB_JSON_IO_HPP_
