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

#ifndef ADSUB_EXPERIMENT_HPP_
#define ADSUB_EXPERIMENT_HPP_

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adsub/json_io.hpp"

namespace adsub {

// Cardinality sweep over seeded instances. Repetition r regenerates the
// instance with seed+r (file-based sources reuse one instance); each policy
// is scored exactly over the full prior support, then averaged across
// repetitions.
struct ExperimentConfig {
  std::string instance_file;       // one of instance_file / generator
  nlohmann::json generator;
  std::uint64_t seed = 1;
  std::vector<std::pair<std::string, PolicySpec>> policies;  // (name, spec)
  int k_min = 1;
  int k_max = 1;
  int repetitions = 1;
  std::string output_path;
  int support_cap = kDefaultSupportCap;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

struct ExperimentRow {
  int k = 0;
  std::string policy;
  double f_avg = 0;
  double f_wc = 0;
};

// Rows sorted by (k, policy name); deterministic for a fixed config.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

std::string rows_to_csv(const std::vector<ExperimentRow>& rows);

}  // namespace adsub

#endif  // ADSUB_EXPERIMENT_HPP_
