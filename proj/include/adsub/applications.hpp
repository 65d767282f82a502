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

#ifndef ADSUB_APPLICATIONS_HPP_
#define ADSUB_APPLICATIONS_HPP_

#include <utility>
#include <vector>

#include "adsub/model.hpp"
#include "adsub/rng.hpp"

namespace adsub {

constexpr int kDefaultSupportCap = 4096;

// Candidate labelings of the data points with positive weights; the induced
// probability of h is q_h / sum of weights.
struct HypothesisSpace {
  std::vector<std::vector<StateId>> labels;  // one total label vector each
  std::vector<double> weights;
};

struct DiffusionEdge {
  int from = 0;
  int to = 0;
  double prob = 0;  // probability the edge is live
};

struct DiffusionGraph {
  int nodes = 0;
  std::vector<DiffusionEdge> edges;
};

// Label-query instance: items are data points, realizations are the distinct
// label vectors (hypotheses sharing a vector are merged, weights summed),
// and f(S, phi) is the prior mass eliminated from the version space by the
// labels of S.
Instance build_active_learning(const HypothesisSpace& hs);

// Independent-cascade seeding instance with full-adoption feedback: one
// realization per live/blocked assignment to the uncertain edges; a node's
// state encodes the status of every edge leaving nodes it reaches through
// live edges; f(S, phi) counts the nodes reachable from S (seeds included,
// each node once).
Instance build_viral_marketing(const DiffusionGraph& g,
                               int support_cap = kDefaultSupportCap);

// Each item covers one of several possible subsets of a universe; subsets
// are drawn independently per item and the product distribution is
// materialized. f(S, phi) is the size of the union of realized subsets.
struct ItemSubsetDistribution {
  std::vector<std::vector<int>> subsets;  // candidate subsets of the universe
  std::vector<double> probs;              // one per subset, positive, sums to 1
};
Instance build_stochastic_coverage(int universe_size,
                                   const std::vector<ItemSubsetDistribution>& items,
                                   int support_cap = kDefaultSupportCap);

// Sensors fail independently; f(S, phi) is the weighted coverage achieved by
// the working sensors in S: sum over locations of the best weight among
// working selected sensors.
Instance build_sensor_selection(const std::vector<std::vector<double>>& weights,
                                const std::vector<double>& failure_probs,
                                int support_cap = kDefaultSupportCap);

// Three-item, two-state tabular instance on which greedy selection by
// worst-case marginals earns only epsilon while the optimum earns 1, even
// though the utility is pointwise submodular. epsilon must lie in (0, 1).
Instance counterexample_instance(double epsilon = 0.1);

// --- Seeded random generators -------------------------------------------

// label_groups: (point count, label alphabet size) per group; weights are
// uniform draws from (0, 1), labels uniform over each group's alphabet.
HypothesisSpace random_hypothesis_space(
    SeededRng& rng, int num_hypotheses,
    const std::vector<std::pair<int, int>>& label_groups);

DiffusionGraph random_diffusion_graph(SeededRng& rng, int nodes,
                                      int uncertain_edges,
                                      int deterministic_edges = 0);

std::vector<ItemSubsetDistribution> random_coverage_items(SeededRng& rng,
                                                          int num_items,
                                                          int universe_size,
                                                          int subsets_per_item);

void random_sensor_parameters(SeededRng& rng, int num_sensors,
                              int num_locations,
                              std::vector<std::vector<double>>* weights,
                              std::vector<double>* failure_probs);

}  // namespace adsub

#endif  // ADSUB_APPLICATIONS_HPP_
