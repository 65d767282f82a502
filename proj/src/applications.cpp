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

#include "adsub/applications.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

namespace adsub {

namespace {

// ---------------------------------------------------------------------------
// Active learning: f(S, phi) = eliminated version-space mass.
// ---------------------------------------------------------------------------

class VersionSpaceUtility : public UtilityModel {
 public:
  VersionSpaceUtility(std::vector<std::vector<StateId>> class_labels,
                      std::vector<double> class_masses)
      : class_labels_(std::move(class_labels)),
        class_masses_(std::move(class_masses)) {}

  double value(ItemSet items, const Realization& phi,
               int /*support_index*/) const override {
    const auto selected = items.items();
    double surviving = 0;
    for (std::size_t c = 0; c < class_labels_.size(); ++c) {
      bool agrees = true;
      for (ItemId e : selected) {
        if (class_labels_[c][static_cast<std::size_t>(e)] != phi.at(e)) {
          agrees = false;
          break;
        }
      }
      if (agrees) surviving += class_masses_[c];
    }
    return 1.0 - surviving;
  }

  bool claims_minimal_dependency() const override { return true; }
  std::string kind() const override { return "active-learning"; }

  nlohmann::json descriptor_json() const override {
    return {{"type", "active-learning"},
            {"labels", class_labels_},
            {"weights", class_masses_}};
  }

 private:
  std::vector<std::vector<StateId>> class_labels_;
  std::vector<double> class_masses_;
};

// ---------------------------------------------------------------------------
// Viral marketing under independent cascade with full-adoption feedback.
// A node state is an interned edge-status pattern: the status of every edge
// leaving a node reachable from it through live edges, unknown elsewhere.
// ---------------------------------------------------------------------------

class CascadeReachUtility : public UtilityModel {
 public:
  CascadeReachUtility(DiffusionGraph graph,
                      std::vector<std::vector<signed char>> patterns)
      : graph_(std::move(graph)), patterns_(std::move(patterns)) {
    out_edges_.resize(static_cast<std::size_t>(graph_.nodes));
    for (std::size_t j = 0; j < graph_.edges.size(); ++j) {
      out_edges_[static_cast<std::size_t>(graph_.edges[j].from)].push_back(
          static_cast<int>(j));
    }
  }

  double value(ItemSet items, const Realization& phi,
               int /*support_index*/) const override {
    std::vector<char> reached(static_cast<std::size_t>(graph_.nodes), 0);
    for (ItemId seed : items.items()) {
      const auto& pattern =
          patterns_[static_cast<std::size_t>(phi.at(seed))];
      std::vector<int> frontier{seed};
      std::vector<char> seen(static_cast<std::size_t>(graph_.nodes), 0);
      seen[static_cast<std::size_t>(seed)] = 1;
      while (!frontier.empty()) {
        const int u = frontier.back();
        frontier.pop_back();
        reached[static_cast<std::size_t>(u)] = 1;
        for (int j : out_edges_[static_cast<std::size_t>(u)]) {
          if (pattern[static_cast<std::size_t>(j)] != 1) continue;
          const int v = graph_.edges[static_cast<std::size_t>(j)].to;
          if (!seen[static_cast<std::size_t>(v)]) {
            seen[static_cast<std::size_t>(v)] = 1;
            frontier.push_back(v);
          }
        }
      }
    }
    double total = 0;
    for (char r : reached) total += r;
    return total;
  }

  bool claims_minimal_dependency() const override { return true; }
  std::string kind() const override { return "viral"; }

  nlohmann::json descriptor_json() const override {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : graph_.edges) {
      edges.push_back({e.from, e.to, e.prob});
    }
    return {{"type", "viral"}, {"nodes", graph_.nodes}, {"edges", edges}};
  }

 private:
  DiffusionGraph graph_;
  std::vector<std::vector<signed char>> patterns_;  // -1 unknown, 0/1 status
  std::vector<std::vector<int>> out_edges_;
};

// ---------------------------------------------------------------------------
// Stochastic coverage: f(S, phi) = |union of realized subsets|.
// ---------------------------------------------------------------------------

class UnionCoverageUtility : public UtilityModel {
 public:
  UnionCoverageUtility(int universe_size,
                       std::vector<ItemSubsetDistribution> items)
      : universe_size_(universe_size), items_(std::move(items)) {
    const std::size_t words = (static_cast<std::size_t>(universe_size) + 63) / 64;
    for (const auto& item : items_) {
      std::vector<std::vector<std::uint64_t>> encoded;
      for (const auto& subset : item.subsets) {
        std::vector<std::uint64_t> bits(words, 0);
        for (int elt : subset) {
          bits[static_cast<std::size_t>(elt) / 64] |=
              std::uint64_t{1} << (static_cast<std::size_t>(elt) % 64);
        }
        encoded.push_back(std::move(bits));
      }
      subset_bits_.push_back(std::move(encoded));
    }
  }

  double value(ItemSet items, const Realization& phi,
               int /*support_index*/) const override {
    const std::size_t words = (static_cast<std::size_t>(universe_size_) + 63) / 64;
    std::vector<std::uint64_t> covered(words, 0);
    for (ItemId e : items.items()) {
      const auto& bits =
          subset_bits_[static_cast<std::size_t>(e)]
                      [static_cast<std::size_t>(phi.at(e))];
      for (std::size_t w = 0; w < words; ++w) covered[w] |= bits[w];
    }
    int count = 0;
    for (std::uint64_t w : covered) count += std::popcount(w);
    return count;
  }

  bool claims_minimal_dependency() const override { return true; }
  std::string kind() const override { return "coverage"; }

  nlohmann::json descriptor_json() const override {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& item : items_) {
      items.push_back({{"subsets", item.subsets}, {"probs", item.probs}});
    }
    return {{"type", "coverage"},
            {"universe", universe_size_},
            {"items", items}};
  }

 private:
  int universe_size_;
  std::vector<ItemSubsetDistribution> items_;
  std::vector<std::vector<std::vector<std::uint64_t>>> subset_bits_;
};

// ---------------------------------------------------------------------------
// Sensor selection: weighted coverage by working sensors,
// g(T) = sum over locations of the best weight in T.
// ---------------------------------------------------------------------------

class SensorCoverageUtility : public UtilityModel {
 public:
  SensorCoverageUtility(std::vector<std::vector<double>> weights,
                        std::vector<double> failure_probs)
      : weights_(std::move(weights)),
        failure_probs_(std::move(failure_probs)) {}

  double value(ItemSet items, const Realization& phi,
               int /*support_index*/) const override {
    if (weights_.empty()) return 0;
    const std::size_t locations = weights_.front().size();
    double total = 0;
    for (std::size_t loc = 0; loc < locations; ++loc) {
      double best = 0;
      for (ItemId e : items.items()) {
        if (phi.at(e) == kWorking) {
          best = std::max(best, weights_[static_cast<std::size_t>(e)][loc]);
        }
      }
      total += best;
    }
    return total;
  }

  bool claims_minimal_dependency() const override { return true; }
  std::string kind() const override { return "sensors"; }

  nlohmann::json descriptor_json() const override {
    return {{"type", "sensors"},
            {"weights", weights_},
            {"failure_probs", failure_probs_}};
  }

  static constexpr StateId kFailed = 0;
  static constexpr StateId kWorking = 1;

 private:
  std::vector<std::vector<double>> weights_;
  std::vector<double> failure_probs_;
};

void check_support_cap(std::size_t size, int cap) {
  if (size > static_cast<std::size_t>(cap)) {
    fail(ErrorCode::kSupportTooLarge,
         "materialized support of " + std::to_string(size) +
             " realizations exceeds cap " + std::to_string(cap));
  }
}

}  // namespace

Instance build_active_learning(const HypothesisSpace& hs) {
  if (hs.labels.empty()) {
    fail(ErrorCode::kEmptyHypothesisSpace, "no hypotheses given");
  }
  if (hs.labels.size() != hs.weights.size()) {
    fail(ErrorCode::kValidation, "labels and weights sizes differ");
  }
  const std::size_t points = hs.labels.front().size();
  double total_weight = 0;
  StateId max_label = 0;
  for (std::size_t h = 0; h < hs.labels.size(); ++h) {
    if (hs.labels[h].size() != points) {
      fail(ErrorCode::kValidation, "hypothesis label vectors differ in length");
    }
    if (!(hs.weights[h] > 0)) {
      fail(ErrorCode::kValidation, "hypothesis weights must be positive");
    }
    total_weight += hs.weights[h];
    for (StateId o : hs.labels[h]) max_label = std::max(max_label, o);
  }
  // Merge hypotheses sharing a label vector; each distinct vector is one
  // realization whose probability is the merged normalized mass. Weights
  // that already sum to one are used verbatim so serialized instances
  // reload bit-identically.
  const bool normalized = std::abs(total_weight - 1.0) <= 1e-12;
  std::vector<std::vector<StateId>> class_labels;
  std::vector<double> class_masses;
  std::map<std::vector<StateId>, std::size_t> index_of;
  for (std::size_t h = 0; h < hs.labels.size(); ++h) {
    auto [it, inserted] = index_of.try_emplace(hs.labels[h], class_labels.size());
    if (inserted) {
      class_labels.push_back(hs.labels[h]);
      class_masses.push_back(0);
    }
    class_masses[it->second] +=
        normalized ? hs.weights[h] : hs.weights[h] / total_weight;
  }
  std::vector<WeightedRealization> support;
  for (std::size_t c = 0; c < class_labels.size(); ++c) {
    support.push_back({Realization{class_labels[c]}, class_masses[c]});
  }
  auto utility = std::make_shared<VersionSpaceUtility>(std::move(class_labels),
                                                       std::move(class_masses));
  return Instance(max_label + 1, std::move(support), std::move(utility));
}

Instance build_viral_marketing(const DiffusionGraph& g, int support_cap) {
  if (g.nodes < 1) {
    fail(ErrorCode::kValidation, "diffusion graph has no nodes");
  }
  std::vector<int> uncertain;
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    const auto& e = g.edges[j];
    if (e.from < 0 || e.from >= g.nodes || e.to < 0 || e.to >= g.nodes) {
      fail(ErrorCode::kValidation, "edge endpoint outside the node set");
    }
    if (e.prob < 0 || e.prob > 1) {
      fail(ErrorCode::kValidation, "propagation probability outside [0, 1]");
    }
    for (std::size_t i = 0; i < j; ++i) {
      if (g.edges[i].from == e.from && g.edges[i].to == e.to) {
        fail(ErrorCode::kValidation, "duplicate edge in diffusion graph");
      }
    }
    if (e.prob > 0 && e.prob < 1) uncertain.push_back(static_cast<int>(j));
  }
  if (uncertain.size() >= 63 ||
      (std::size_t{1} << uncertain.size()) > static_cast<std::size_t>(support_cap)) {
    fail(ErrorCode::kSupportTooLarge,
         "too many uncertain edges for the support cap");
  }

  std::vector<std::vector<int>> out_edges(static_cast<std::size_t>(g.nodes));
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    out_edges[static_cast<std::size_t>(g.edges[j].from)].push_back(
        static_cast<int>(j));
  }

  // Intern each node's observable edge-status pattern per edge assignment.
  std::map<std::vector<signed char>, StateId> pattern_ids;
  std::vector<std::vector<signed char>> patterns;
  std::vector<WeightedRealization> support;
  const std::size_t assignments = std::size_t{1} << uncertain.size();
  for (std::size_t a = 0; a < assignments; ++a) {
    std::vector<signed char> live(g.edges.size(), 0);
    double prob = 1.0;
    for (std::size_t j = 0; j < g.edges.size(); ++j) {
      if (g.edges[j].prob >= 1.0) live[j] = 1;
    }
    for (std::size_t b = 0; b < uncertain.size(); ++b) {
      const auto j = static_cast<std::size_t>(uncertain[b]);
      const bool is_live = (a >> b) & 1;
      live[j] = is_live ? 1 : 0;
      prob *= is_live ? g.edges[j].prob : 1.0 - g.edges[j].prob;
    }
    Realization phi;
    phi.states.resize(static_cast<std::size_t>(g.nodes));
    for (int u = 0; u < g.nodes; ++u) {
      // Full-adoption feedback: reach of u through live edges, then the
      // status of every edge leaving a reached node.
      std::vector<char> reached(static_cast<std::size_t>(g.nodes), 0);
      std::vector<int> frontier{u};
      reached[static_cast<std::size_t>(u)] = 1;
      while (!frontier.empty()) {
        const int w = frontier.back();
        frontier.pop_back();
        for (int j : out_edges[static_cast<std::size_t>(w)]) {
          if (live[static_cast<std::size_t>(j)] != 1) continue;
          const int v = g.edges[static_cast<std::size_t>(j)].to;
          if (!reached[static_cast<std::size_t>(v)]) {
            reached[static_cast<std::size_t>(v)] = 1;
            frontier.push_back(v);
          }
        }
      }
      std::vector<signed char> pattern(g.edges.size(), -1);
      for (std::size_t j = 0; j < g.edges.size(); ++j) {
        if (reached[static_cast<std::size_t>(g.edges[j].from)]) {
          pattern[j] = live[j];
        }
      }
      auto [it, inserted] =
          pattern_ids.try_emplace(pattern, static_cast<StateId>(patterns.size()));
      if (inserted) patterns.push_back(pattern);
      phi.states[static_cast<std::size_t>(u)] = it->second;
    }
    if (prob > 0) support.push_back({std::move(phi), prob});
  }
  check_support_cap(support.size(), support_cap);
  auto utility =
      std::make_shared<CascadeReachUtility>(g, std::move(patterns));
  return Instance(static_cast<int>(pattern_ids.size()), std::move(support),
                  std::move(utility));
}

Instance build_stochastic_coverage(
    int universe_size, const std::vector<ItemSubsetDistribution>& items,
    int support_cap) {
  if (items.empty()) {
    fail(ErrorCode::kValidation, "no items given");
  }
  if (universe_size < 0) {
    fail(ErrorCode::kValidation, "universe size must be non-negative");
  }
  std::size_t combinations = 1;
  int max_states = 0;
  for (const auto& item : items) {
    if (item.subsets.empty() || item.subsets.size() != item.probs.size()) {
      fail(ErrorCode::kValidation, "item subsets/probs malformed");
    }
    double sum = 0;
    for (double p : item.probs) {
      if (!(p > 0)) {
        fail(ErrorCode::kValidation, "subset probabilities must be positive");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      fail(ErrorCode::kValidation, "subset probabilities must sum to 1");
    }
    for (const auto& subset : item.subsets) {
      for (int elt : subset) {
        if (elt < 0 || elt >= universe_size) {
          fail(ErrorCode::kValidation, "subset element outside universe");
        }
      }
    }
    combinations *= item.subsets.size();
    check_support_cap(combinations, support_cap);
    max_states = std::max(max_states, static_cast<int>(item.subsets.size()));
  }

  // Mixed-radix enumeration of the product distribution, item 0 fastest.
  std::vector<WeightedRealization> support;
  std::vector<StateId> current(items.size(), 0);
  while (true) {
    double prob = 1.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
      prob *= items[i].probs[static_cast<std::size_t>(current[i])];
    }
    support.push_back({Realization{current}, prob});
    std::size_t i = 0;
    while (i < items.size() &&
           ++current[i] == static_cast<StateId>(items[i].subsets.size())) {
      current[i] = 0;
      ++i;
    }
    if (i == items.size()) break;
  }
  auto utility = std::make_shared<UnionCoverageUtility>(universe_size, items);
  return Instance(max_states, std::move(support), std::move(utility));
}

Instance build_sensor_selection(const std::vector<std::vector<double>>& weights,
                                const std::vector<double>& failure_probs,
                                int support_cap) {
  if (weights.empty() || weights.size() != failure_probs.size()) {
    fail(ErrorCode::kValidation, "weights and failure_probs sizes differ");
  }
  const std::size_t locations = weights.front().size();
  for (const auto& row : weights) {
    if (row.size() != locations) {
      fail(ErrorCode::kValidation, "weight rows differ in length");
    }
    for (double w : row) {
      if (w < 0) fail(ErrorCode::kValidation, "weights must be non-negative");
    }
  }
  std::size_t combinations = 1;
  for (double p : failure_probs) {
    if (p < 0 || p > 1) {
      fail(ErrorCode::kValidation, "failure probability outside [0, 1]");
    }
    if (p > 0 && p < 1) {
      combinations *= 2;
      check_support_cap(combinations, support_cap);
    }
  }

  const int n = static_cast<int>(weights.size());
  std::vector<WeightedRealization> support;
  std::vector<StateId> states(static_cast<std::size_t>(n), 0);
  // Recursive enumeration flattened: sensors with deterministic status
  // contribute a single state.
  std::vector<int> uncertain;
  for (int e = 0; e < n; ++e) {
    const double p = failure_probs[static_cast<std::size_t>(e)];
    if (p == 0) {
      states[static_cast<std::size_t>(e)] = SensorCoverageUtility::kWorking;
    } else if (p == 1) {
      states[static_cast<std::size_t>(e)] = SensorCoverageUtility::kFailed;
    } else {
      uncertain.push_back(e);
    }
  }
  const std::size_t assignments = std::size_t{1} << uncertain.size();
  for (std::size_t a = 0; a < assignments; ++a) {
    Realization phi{states};
    double prob = 1.0;
    for (std::size_t b = 0; b < uncertain.size(); ++b) {
      const auto e = static_cast<std::size_t>(uncertain[b]);
      const bool working = (a >> b) & 1;
      phi.states[e] = working ? SensorCoverageUtility::kWorking
                              : SensorCoverageUtility::kFailed;
      prob *= working ? 1.0 - failure_probs[e] : failure_probs[e];
    }
    support.push_back({std::move(phi), prob});
  }
  auto utility = std::make_shared<SensorCoverageUtility>(
      std::vector<std::vector<double>>(weights),
      std::vector<double>(failure_probs));
  return Instance(2, std::move(support), std::move(utility));
}

Instance counterexample_instance(double epsilon) {
  if (!(epsilon > 0 && epsilon < 1)) {
    fail(ErrorCode::kValidation, "epsilon must lie in (0, 1)");
  }
  const double e = epsilon;
  std::map<std::uint64_t, std::vector<double>> rows;
  rows[0b000] = {0, 0, 0};
  rows[0b001] = {e, e, e};
  rows[0b010] = {1, 0, 1};
  rows[0b100] = {1, 1, 0};
  rows[0b011] = {1 + e, e, 1 + e};
  rows[0b110] = {2, 1, 1};
  rows[0b101] = {1 + e, 1 + e, e};
  rows[0b111] = {2 + e, 1 + e, 1 + e};
  auto utility = std::make_shared<TableUtility>(std::move(rows), 3,
                                                /*claims_minimal_dependency=*/true);
  std::vector<WeightedRealization> support = {
      {Realization{{0, 1, 1}}, 1.0 / 3},
      {Realization{{1, 0, 1}}, 1.0 / 3},
      {Realization{{1, 1, 0}}, 1.0 / 3},
  };
  return Instance(2, std::move(support), std::move(utility));
}

HypothesisSpace random_hypothesis_space(
    SeededRng& rng, int num_hypotheses,
    const std::vector<std::pair<int, int>>& label_groups) {
  HypothesisSpace hs;
  for (int h = 0; h < num_hypotheses; ++h) {
    std::vector<StateId> labels;
    for (const auto& [count, alphabet] : label_groups) {
      for (int i = 0; i < count; ++i) {
        labels.push_back(static_cast<StateId>(
            rng.uniform_index(static_cast<std::uint64_t>(alphabet))));
      }
    }
    double w = rng.uniform_real();
    while (w <= 0) w = rng.uniform_real();
    hs.labels.push_back(std::move(labels));
    hs.weights.push_back(w);
  }
  return hs;
}

DiffusionGraph random_diffusion_graph(SeededRng& rng, int nodes,
                                      int uncertain_edges,
                                      int deterministic_edges) {
  DiffusionGraph g;
  g.nodes = nodes;
  const int total_pairs = nodes * (nodes - 1);
  const int wanted = uncertain_edges + deterministic_edges;
  if (wanted > total_pairs) {
    fail(ErrorCode::kValidation, "more edges requested than ordered pairs");
  }
  const auto chosen = rng.sample_without_replacement(total_pairs, wanted);
  for (int i = 0; i < wanted; ++i) {
    const int pair = chosen[static_cast<std::size_t>(i)];
    const int u = pair / (nodes - 1);
    int v = pair % (nodes - 1);
    if (v >= u) ++v;
    const double p =
        i < uncertain_edges ? 0.3 + 0.4 * rng.uniform_real() : 1.0;
    g.edges.push_back({u, v, p});
  }
  return g;
}

std::vector<ItemSubsetDistribution> random_coverage_items(SeededRng& rng,
                                                          int num_items,
                                                          int universe_size,
                                                          int subsets_per_item) {
  std::vector<ItemSubsetDistribution> items;
  for (int i = 0; i < num_items; ++i) {
    ItemSubsetDistribution dist;
    double total = 0;
    for (int s = 0; s < subsets_per_item; ++s) {
      std::vector<int> subset;
      for (int elt = 0; elt < universe_size; ++elt) {
        if (rng.uniform_index(2) == 1) subset.push_back(elt);
      }
      double w = rng.uniform_real();
      while (w <= 0) w = rng.uniform_real();
      dist.subsets.push_back(std::move(subset));
      dist.probs.push_back(w);
      total += w;
    }
    for (double& p : dist.probs) p /= total;
    items.push_back(std::move(dist));
  }
  return items;
}

void random_sensor_parameters(SeededRng& rng, int num_sensors,
                              int num_locations,
                              std::vector<std::vector<double>>* weights,
                              std::vector<double>* failure_probs) {
  weights->clear();
  failure_probs->clear();
  for (int e = 0; e < num_sensors; ++e) {
    std::vector<double> row;
    for (int loc = 0; loc < num_locations; ++loc) {
      row.push_back(rng.uniform_real());
    }
    weights->push_back(std::move(row));
    failure_probs->push_back(0.2 + 0.6 * rng.uniform_real());
  }
}

}  // namespace adsub
