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

#include "adsub/json_io.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace adsub {

namespace {

using nlohmann::json;

constexpr const char* kFormatVersion = "asm-1";

void require_fields(const json& j, std::initializer_list<const char*> fields,
                    const std::string& what) {
  if (!j.is_object()) {
    fail(ErrorCode::kValidation, what + " must be a JSON object");
  }
  for (const char* f : fields) {
    if (!j.contains(f)) {
      fail(ErrorCode::kValidation,
           what + " is missing field '" + std::string(f) + "'");
    }
  }
}

std::shared_ptr<const UtilityModel> utility_from_json(const json& j,
                                                      int num_items,
                                                      int support_size) {
  require_fields(j, {"type"}, "utility descriptor");
  const std::string type = j.at("type").get<std::string>();
  if (type == "table") {
    require_fields(j, {"rows"}, "table utility");
    std::map<std::uint64_t, std::vector<double>> rows;
    for (const auto& row : j.at("rows")) {
      require_fields(row, {"set", "values"}, "table row");
      std::vector<ItemId> items = row.at("set").get<std::vector<ItemId>>();
      for (ItemId e : items) {
        if (e < 0 || e >= num_items) {
          fail(ErrorCode::kValidation, "table row item outside ground set");
        }
      }
      const std::uint64_t mask = ItemSet::from_items(items).mask();
      if (!rows.emplace(mask, row.at("values").get<std::vector<double>>())
               .second) {
        fail(ErrorCode::kValidation, "duplicate table row");
      }
    }
    const bool claims = j.value("claims_minimal_dependency", false);
    return std::make_shared<TableUtility>(std::move(rows), support_size,
                                          claims);
  }
  if (type == "active-learning") {
    require_fields(j, {"labels", "weights"}, "active-learning utility");
    HypothesisSpace hs;
    hs.labels = j.at("labels").get<std::vector<std::vector<StateId>>>();
    hs.weights = j.at("weights").get<std::vector<double>>();
    return build_active_learning(hs).utility_ptr();
  }
  if (type == "viral") {
    require_fields(j, {"nodes", "edges"}, "viral utility");
    DiffusionGraph g;
    g.nodes = j.at("nodes").get<int>();
    for (const auto& e : j.at("edges")) {
      g.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(),
                         e.at(2).get<double>()});
    }
    return build_viral_marketing(g).utility_ptr();
  }
  if (type == "coverage") {
    require_fields(j, {"universe", "items"}, "coverage utility");
    std::vector<ItemSubsetDistribution> items;
    for (const auto& it : j.at("items")) {
      require_fields(it, {"subsets", "probs"}, "coverage item");
      ItemSubsetDistribution dist;
      dist.subsets = it.at("subsets").get<std::vector<std::vector<int>>>();
      dist.probs = it.at("probs").get<std::vector<double>>();
      items.push_back(std::move(dist));
    }
    return build_stochastic_coverage(j.at("universe").get<int>(), items)
        .utility_ptr();
  }
  if (type == "sensors") {
    require_fields(j, {"weights", "failure_probs"}, "sensors utility");
    return build_sensor_selection(
               j.at("weights").get<std::vector<std::vector<double>>>(),
               j.at("failure_probs").get<std::vector<double>>())
        .utility_ptr();
  }
  fail(ErrorCode::kValidation, "unknown utility type: " + type);
}

}  // namespace

json instance_to_json(const Instance& inst) {
  json prior = json::array();
  for (const auto& wr : inst.support()) {
    prior.push_back({{"states", wr.realization.states}, {"prob", wr.prob}});
  }
  return {{"version", kFormatVersion},
          {"n", inst.num_items()},
          {"num_states", inst.num_states()},
          {"prior", prior},
          {"utility", inst.utility().descriptor_json()}};
}

Instance instance_from_json(const json& j, int support_cap) {
  require_fields(j, {"version", "n", "num_states", "prior", "utility"},
                 "instance");
  if (j.at("version").get<std::string>() != kFormatVersion) {
    fail(ErrorCode::kValidation, "unsupported instance format version");
  }
  const int n = j.at("n").get<int>();
  const int num_states = j.at("num_states").get<int>();
  std::vector<WeightedRealization> support;
  for (const auto& entry : j.at("prior")) {
    require_fields(entry, {"states", "prob"}, "prior entry");
    WeightedRealization wr;
    wr.realization.states = entry.at("states").get<std::vector<StateId>>();
    if (wr.realization.num_items() != n) {
      fail(ErrorCode::kValidation, "prior realization has wrong length");
    }
    wr.prob = entry.at("prob").get<double>();
    support.push_back(std::move(wr));
  }
  if (support.size() > static_cast<std::size_t>(support_cap)) {
    fail(ErrorCode::kSupportTooLarge,
         "prior support exceeds cap " + std::to_string(support_cap));
  }
  auto utility = utility_from_json(j.at("utility"), n,
                                   static_cast<int>(support.size()));
  return Instance(num_states, std::move(support), std::move(utility));
}

ConstraintSystem constraint_from_json(const json& j, int num_items) {
  require_fields(j, {"type"}, "constraint descriptor");
  const std::string type = j.at("type").get<std::string>();
  if (type == "cardinality") {
    require_fields(j, {"k"}, "cardinality constraint");
    return ConstraintSystem::cardinality(num_items, j.at("k").get<int>());
  }
  if (type == "partition") {
    require_fields(j, {"blocks", "limits"}, "partition constraint");
    return ConstraintSystem::partition_matroid(
        num_items, j.at("blocks").get<std::vector<std::vector<ItemId>>>(),
        j.at("limits").get<std::vector<int>>());
  }
  if (type == "explicit") {
    require_fields(j, {"independent_sets", "p"}, "explicit constraint");
    std::vector<ItemSet> sets;
    for (const auto& s : j.at("independent_sets")) {
      sets.push_back(ItemSet::from_items(s.get<std::vector<ItemId>>()));
    }
    return ConstraintSystem::explicit_system(num_items, sets,
                                             j.at("p").get<int>());
  }
  fail(ErrorCode::kValidation, "unknown constraint type: " + type);
}

json constraint_to_json(const ConstraintSystem& c) {
  switch (c.kind()) {
    case ConstraintSystem::Kind::kCardinality:
      return {{"type", "cardinality"}, {"k", c.cardinality_limit()}};
    case ConstraintSystem::Kind::kPartitionMatroid:
      return {{"type", "partition"},
              {"blocks", c.blocks()},
              {"limits", c.limits()}};
    case ConstraintSystem::Kind::kExplicit: {
      // Reconstructing the family is not needed by any caller; explicit
      // systems round-trip through their original descriptors.
      fail(ErrorCode::kValidation,
           "explicit constraint systems do not serialize");
    }
  }
  fail(ErrorCode::kValidation, "unknown constraint kind");
}

PolicySpec policy_from_json(const json& j) {
  require_fields(j, {"policy"}, "policy descriptor");
  PolicySpec spec;
  spec.policy = j.at("policy").get<std::string>();
  static const std::set<std::string> known = {
      "wc-psystem",  "wc-card",    "stoch-wc",    "avg",
      "hybrid-card", "matroid-wc", "matroid-avg", "hybrid-matroid"};
  if (!known.count(spec.policy)) {
    fail(ErrorCode::kValidation, "unknown policy: " + spec.policy);
  }
  if (j.contains("k")) spec.k = j.at("k").get<int>();
  if (j.contains("budget")) spec.budget = j.at("budget").get<int>();
  if (j.contains("eps")) spec.eps = j.at("eps").get<double>();
  if (j.contains("q")) spec.q = j.at("q").get<double>();
  if (j.contains("beta")) spec.beta = j.at("beta").get<double>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  spec.hybrid_exclude_repeats = j.value("hybrid_exclude_repeats", false);
  return spec;
}

double effective_q(const PolicySpec& spec) {
  if (spec.q) return *spec.q;
  if (spec.beta) {
    const bool matroid = spec.policy == "matroid-wc" ||
                         spec.policy == "matroid-avg" ||
                         spec.policy == "hybrid-matroid";
    return matroid ? optimal_q_matroid(*spec.beta)
                   : optimal_q_cardinality(*spec.beta);
  }
  return 0.5;
}

namespace {

int required_k(const ConstraintSystem& c, const PolicySpec& spec) {
  if (spec.k) return *spec.k;
  if (c.kind() == ConstraintSystem::Kind::kCardinality) {
    return c.cardinality_limit();
  }
  fail(ErrorCode::kValidation,
       "policy '" + spec.policy + "' needs k (none in descriptor or constraint)");
}

}  // namespace

PolicyRunner make_runner(const Instance& inst, const ConstraintSystem& c,
                         const PolicySpec& spec) {
  const double q = effective_q(spec);
  if (spec.policy == "wc-psystem") {
    return [&inst, &c](const Environment& env) {
      return run_wc_greedy_psystem(inst, c, env);
    };
  }
  if (spec.policy == "wc-card") {
    const int k = required_k(c, spec);
    const int budget = spec.budget.value_or(k);
    return [&inst, k, budget](const Environment& env) {
      return run_wc_greedy_cardinality(inst, k, budget, env);
    };
  }
  if (spec.policy == "stoch-wc") {
    const int k = required_k(c, spec);
    if (!spec.eps) fail(ErrorCode::kInvalidEps, "stoch-wc requires eps");
    const double eps = *spec.eps;
    const std::uint64_t seed = spec.seed.value_or(1);
    return [&inst, k, eps, seed](const Environment& env) {
      SeededRng rng(seed);
      return run_stochastic_wc_greedy(inst, k, eps, env, rng);
    };
  }
  if (spec.policy == "avg") {
    const int k = required_k(c, spec);
    const int budget = spec.budget.value_or(k);
    return [&inst, budget](const Environment& env) {
      return run_avg_greedy(inst, budget, std::nullopt, env);
    };
  }
  if (spec.policy == "hybrid-card") {
    const int k = required_k(c, spec);
    const bool exclude = spec.hybrid_exclude_repeats;
    return [&inst, k, q, exclude](const Environment& env) {
      return run_hybrid_cardinality(inst, k, env, q, exclude);
    };
  }
  if (spec.policy == "matroid-wc") {
    return [&inst, &c, q](const Environment& env) {
      return run_matroid_greedy(inst, c, MarginalMode::kWorstCase, q, env);
    };
  }
  if (spec.policy == "matroid-avg") {
    return [&inst, &c, q](const Environment& env) {
      return run_matroid_greedy(inst, c, MarginalMode::kAverage, q, env);
    };
  }
  if (spec.policy == "hybrid-matroid") {
    const bool exclude = spec.hybrid_exclude_repeats;
    return [&inst, &c, q, exclude](const Environment& env) {
      return run_hybrid_matroid(inst, c, env, q, exclude);
    };
  }
  fail(ErrorCode::kValidation, "unknown policy: " + spec.policy);
}

json run_to_json(const PolicyRun& run) {
  json observations = json::array();
  for (const auto& [e, o] : run.final_observation.observations()) {
    observations.push_back({e, o});
  }
  return {{"selections", run.selections},
          {"step_marginals", run.step_marginals},
          {"observations", observations},
          {"selected_set", run.selected_set.items()},
          {"utility", run.utility},
          {"candidate_evaluations", run.candidate_evaluations}};
}

json report_to_json(const RobustnessReport& r) {
  json out = {{"f_wc", r.f_wc},
              {"f_avg", r.f_avg},
              {"opt_wc", r.opt_wc},
              {"opt_avg", r.opt_avg}};
  auto set = [&out](const char* name, const std::optional<double>& v) {
    out[name] = v ? json(*v) : json(nullptr);
  };
  set("wc_ratio", r.wc_ratio);
  set("avg_ratio", r.avg_ratio);
  set("alpha", r.alpha);
  if (r.beta) {
    set("beta", r.beta);
    set("alpha_beta", r.alpha_beta);
  }
  return out;
}

json property_report_to_json(const PropertyReport& r) {
  json out = {
      {"property", r.property}, {"pass", r.pass}, {"checked", r.checked}};
  if (r.witness) {
    const auto& w = *r.witness;
    json jw;
    json psi = json::array();
    for (const auto& [e, o] : w.psi.observations()) psi.push_back({e, o});
    jw["psi"] = psi;
    if (w.psi_prime) {
      json psi_prime = json::array();
      for (const auto& [e, o] : w.psi_prime->observations()) {
        psi_prime.push_back({e, o});
      }
      jw["psi_prime"] = psi_prime;
    }
    if (w.item) jw["item"] = *w.item;
    if (w.realization_index) jw["realization_index"] = *w.realization_index;
    if (w.set_small) jw["set_small"] = *w.set_small;
    if (w.set_large) jw["set_large"] = *w.set_large;
    jw["lhs"] = w.lhs;
    jw["rhs"] = w.rhs;
    jw["note"] = w.note;
    out["witness"] = jw;
  }
  return out;
}

json tree_to_json(const DecisionTreeNode& node) {
  json out = {{"value", node.value}};
  if (node.stops()) {
    out["item"] = nullptr;
  } else {
    out["item"] = node.item;
    json children = json::object();
    for (const auto& [state, child] : node.children) {
      children[std::to_string(state)] = tree_to_json(*child);
    }
    out["children"] = children;
  }
  return out;
}

Instance generate_instance(const json& descriptor, std::uint64_t seed,
                           int support_cap) {
  require_fields(descriptor, {"type"}, "generator descriptor");
  const std::string type = descriptor.at("type").get<std::string>();
  SeededRng rng(seed);
  if (type == "counterexample") {
    return counterexample_instance(descriptor.value("epsilon", 0.1));
  }
  if (type == "active-learning-random") {
    require_fields(descriptor, {"hypotheses"}, "active-learning generator");
    std::vector<std::pair<int, int>> groups;
    if (descriptor.contains("label_groups")) {
      for (const auto& g : descriptor.at("label_groups")) {
        groups.emplace_back(g.at(0).get<int>(), g.at(1).get<int>());
      }
    } else {
      require_fields(descriptor, {"points"}, "active-learning generator");
      groups.emplace_back(descriptor.at("points").get<int>(),
                          descriptor.value("labels", 2));
    }
    const auto hs = random_hypothesis_space(
        rng, descriptor.at("hypotheses").get<int>(), groups);
    Instance inst = build_active_learning(hs);
    if (inst.support().size() > static_cast<std::size_t>(support_cap)) {
      fail(ErrorCode::kSupportTooLarge, "generated support exceeds cap");
    }
    return inst;
  }
  if (type == "viral-random") {
    require_fields(descriptor, {"nodes", "uncertain_edges"},
                   "viral generator");
    const auto g = random_diffusion_graph(
        rng, descriptor.at("nodes").get<int>(),
        descriptor.at("uncertain_edges").get<int>(),
        descriptor.value("deterministic_edges", 0));
    return build_viral_marketing(g, support_cap);
  }
  if (type == "coverage-random") {
    require_fields(descriptor, {"items", "universe", "subsets_per_item"},
                   "coverage generator");
    const auto items = random_coverage_items(
        rng, descriptor.at("items").get<int>(),
        descriptor.at("universe").get<int>(),
        descriptor.at("subsets_per_item").get<int>());
    return build_stochastic_coverage(descriptor.at("universe").get<int>(),
                                     items, support_cap);
  }
  if (type == "sensors-random") {
    require_fields(descriptor, {"sensors", "locations"}, "sensors generator");
    std::vector<std::vector<double>> weights;
    std::vector<double> failure_probs;
    random_sensor_parameters(rng, descriptor.at("sensors").get<int>(),
                             descriptor.at("locations").get<int>(), &weights,
                             &failure_probs);
    return build_sensor_selection(weights, failure_probs, support_cap);
  }
  fail(ErrorCode::kValidation, "unknown generator type: " + type);
}

}  // namespace adsub
