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

#include "adsub/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace adsub {

namespace {

Instance load_or_generate(const ExperimentConfig& config, int repetition) {
  if (!config.instance_file.empty()) {
    std::ifstream in(config.instance_file);
    if (!in) {
      fail(ErrorCode::kValidation,
           "cannot open instance file: " + config.instance_file);
    }
    nlohmann::json j;
    in >> j;
    return instance_from_json(j, config.support_cap);
  }
  return generate_instance(config.generator,
                           config.seed + static_cast<std::uint64_t>(repetition),
                           config.support_cap);
}

struct CellValues {
  double f_avg = 0;
  double f_wc = 0;
};

// Exact policy values over the full support for one (instance, k, policy).
CellValues evaluate_cell(const Instance& inst, int k, const PolicySpec& spec) {
  PolicySpec bound = spec;
  bound.k = k;
  const ConstraintSystem constraint =
      ConstraintSystem::cardinality(inst.num_items(), k);
  const PolicyRunner runner = make_runner(inst, constraint, bound);
  CellValues values;
  values.f_wc = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < inst.support().size(); ++i) {
    const PolicyRun run = runner(environment_for(inst, static_cast<int>(i)));
    values.f_avg += inst.support()[i].prob * run.utility;
    values.f_wc = std::min(values.f_wc, run.utility);
  }
  return values;
}

}  // namespace

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig config;
  if (j.contains("instance_file")) {
    config.instance_file = j.at("instance_file").get<std::string>();
  } else if (j.contains("generator")) {
    config.generator = j.at("generator");
  } else {
    fail(ErrorCode::kValidation,
         "experiment config needs 'instance_file' or 'generator'");
  }
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  if (!j.contains("policies") || j.at("policies").empty()) {
    fail(ErrorCode::kValidation, "experiment config lists no policies");
  }
  for (const auto& p : j.at("policies")) {
    PolicySpec spec = policy_from_json(p);
    const std::string name = p.value("name", spec.policy);
    config.policies.emplace_back(name, std::move(spec));
  }
  config.k_min = j.at("k_min").get<int>();
  config.k_max = j.at("k_max").get<int>();
  if (config.k_min < 1 || config.k_min > config.k_max) {
    fail(ErrorCode::kValidation, "invalid k sweep bounds");
  }
  config.repetitions = j.value("repetitions", 1);
  if (config.repetitions < 1) {
    fail(ErrorCode::kValidation, "repetitions must be >= 1");
  }
  config.output_path = j.value("output", "");
  config.support_cap = j.value("support_cap", kDefaultSupportCap);
  return config;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  struct RepResult {
    std::map<std::pair<int, std::string>, CellValues> cells;
  };
  auto run_repetition = [&config](int rep) {
    RepResult result;
    const Instance inst = load_or_generate(config, rep);
    if (config.k_max > inst.num_items()) {
      fail(ErrorCode::kValidation, "k sweep exceeds the ground set size");
    }
    for (int k = config.k_min; k <= config.k_max; ++k) {
      for (const auto& [name, spec] : config.policies) {
        result.cells[{k, name}] = evaluate_cell(inst, k, spec);
      }
    }
    return result;
  };

  // Repetitions are independent; spread them across hardware threads.
  std::vector<RepResult> results(static_cast<std::size_t>(config.repetitions));
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                         static_cast<unsigned>(config.repetitions));
  std::vector<std::future<void>> futures;
  for (unsigned w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w]() {
      for (int rep = static_cast<int>(w); rep < config.repetitions;
           rep += static_cast<int>(workers)) {
        results[static_cast<std::size_t>(rep)] = run_repetition(rep);
      }
    }));
  }
  for (auto& f : futures) f.get();

  std::map<std::pair<int, std::string>, CellValues> averaged;
  for (const auto& rep : results) {
    for (const auto& [key, values] : rep.cells) {
      auto& acc = averaged[key];
      acc.f_avg += values.f_avg / config.repetitions;
      acc.f_wc += values.f_wc / config.repetitions;
    }
  }
  std::vector<ExperimentRow> rows;
  for (const auto& [key, values] : averaged) {
    rows.push_back({key.first, key.second, values.f_avg, values.f_wc});
  }
  return rows;  // std::map iteration is already (k, policy)-sorted
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "k,policy,f_avg,f_wc\n";
  for (const auto& row : rows) {
    out << row.k << "," << row.policy << "," << row.f_avg << "," << row.f_wc
        << "\n";
  }
  return out.str();
}

}  // namespace adsub
