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

// Command-line surface: generate instances, run policies, compute exact
// robustness reports, run structural property checks, and sweep experiments
// to CSV. Exit codes: 0 success, 2 validation error, 3 resource-cap error,
// 4 property-check failure under --strict.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "adsub/experiment.hpp"
#include "adsub/json_io.hpp"

namespace {

using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;
constexpr int kExitStrictFail = 4;

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    adsub::fail(adsub::ErrorCode::kValidation,
                "cannot parse " + what + ": " + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    adsub::fail(adsub::ErrorCode::kValidation, "cannot open file: " + path);
  }
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    adsub::fail(adsub::ErrorCode::kValidation,
                "cannot parse " + path + ": " + e.what());
  }
}

struct GlobalOptions {
  std::uint64_t seed = 1;
  double tol = 1e-9;
  int support_cap = adsub::kDefaultSupportCap;
  bool strict = false;
};

adsub::Instance load_instance(const std::string& path, int support_cap) {
  return adsub::instance_from_json(load_json_file(path), support_cap);
}

int cmd_gen(const GlobalOptions& global, const std::string& spec_text,
            const std::string& out_path) {
  const json descriptor = parse_json_text(spec_text, "generator descriptor");
  const adsub::Instance inst =
      adsub::generate_instance(descriptor, global.seed, global.support_cap);
  std::ofstream out(out_path);
  if (!out) {
    adsub::fail(adsub::ErrorCode::kValidation,
                "cannot write file: " + out_path);
  }
  out << adsub::instance_to_json(inst).dump(2) << "\n";
  std::cout << "wrote " << out_path << " (n=" << inst.num_items()
            << ", support=" << inst.support().size() << ")\n";
  return 0;
}

int cmd_run(const GlobalOptions& global, const std::string& instance_path,
            const std::string& constraint_text, const std::string& policy_text,
            const std::string& env_spec) {
  const adsub::Instance inst =
      load_instance(instance_path, global.support_cap);
  const adsub::ConstraintSystem constraint = adsub::constraint_from_json(
      parse_json_text(constraint_text, "constraint descriptor"),
      inst.num_items());
  adsub::PolicySpec spec =
      adsub::policy_from_json(parse_json_text(policy_text, "policy descriptor"));
  if (!spec.seed) spec.seed = global.seed;
  const adsub::PolicyRunner runner = adsub::make_runner(inst, constraint, spec);

  json out;
  if (env_spec == "all") {
    json runs = json::array();
    double f_wc = 0;
    double f_avg = 0;
    bool first = true;
    for (std::size_t i = 0; i < inst.support().size(); ++i) {
      const adsub::PolicyRun run =
          runner(adsub::environment_for(inst, static_cast<int>(i)));
      json entry = adsub::run_to_json(run);
      entry["realization_index"] = i;
      runs.push_back(entry);
      f_wc = first ? run.utility : std::min(f_wc, run.utility);
      f_avg += inst.support()[i].prob * run.utility;
      first = false;
    }
    out = {{"runs", runs}, {"f_wc", f_wc}, {"f_avg", f_avg}};
  } else {
    int index = 0;
    try {
      index = std::stoi(env_spec);
    } catch (const std::exception&) {
      adsub::fail(adsub::ErrorCode::kValidation,
                  "--env must be an index or 'all'");
    }
    if (index < 0 || index >= static_cast<int>(inst.support().size())) {
      adsub::fail(adsub::ErrorCode::kValidation,
                  "realization index out of range: " + env_spec);
    }
    out = adsub::run_to_json(runner(adsub::environment_for(inst, index)));
    out["realization_index"] = index;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_eval(const GlobalOptions& global, const std::string& instance_path,
             const std::string& constraint_text, const std::string& policy_text,
             std::optional<double> beta, bool export_trees) {
  const adsub::Instance inst =
      load_instance(instance_path, global.support_cap);
  const adsub::ConstraintSystem constraint = adsub::constraint_from_json(
      parse_json_text(constraint_text, "constraint descriptor"),
      inst.num_items());
  adsub::PolicySpec spec =
      adsub::policy_from_json(parse_json_text(policy_text, "policy descriptor"));
  if (!spec.seed) spec.seed = global.seed;
  if (!beta && spec.beta) beta = spec.beta;
  const adsub::PolicyRunner runner = adsub::make_runner(inst, constraint, spec);

  const adsub::OracleResult wc = adsub::opt_worst_case(inst, constraint);
  const adsub::OracleResult avg = adsub::opt_average_case(inst, constraint);
  const adsub::RobustnessReport report =
      adsub::eval_exact(inst, wc.value, avg.value, runner, beta);
  json out = adsub::report_to_json(report);
  if (export_trees) {
    out["opt_wc_tree"] = adsub::tree_to_json(*wc.tree);
    out["opt_avg_tree"] = adsub::tree_to_json(*avg.tree);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_check(const GlobalOptions& global, const std::string& instance_path,
              std::vector<std::string> properties) {
  const adsub::Instance inst =
      load_instance(instance_path, global.support_cap);
  if (properties.empty()) properties = adsub::all_property_names();
  adsub::CheckOptions opts;
  opts.tol = global.tol;
  bool any_fail = false;
  for (const std::string& name : properties) {
    const adsub::PropertyReport report =
        adsub::run_property_check(inst, name, opts);
    any_fail = any_fail || !report.pass;
    std::cout << adsub::property_report_to_json(report).dump() << "\n";
  }
  return (any_fail && global.strict) ? kExitStrictFail : 0;
}

int cmd_experiment(const GlobalOptions& global,
                   const std::string& config_path) {
  adsub::ExperimentConfig config =
      adsub::experiment_config_from_json(load_json_file(config_path));
  if (config.support_cap == adsub::kDefaultSupportCap) {
    config.support_cap = global.support_cap;
  }
  const auto rows = adsub::run_experiment(config);
  const std::string csv = adsub::rows_to_csv(rows);
  if (config.output_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(config.output_path);
    if (!out) {
      adsub::fail(adsub::ErrorCode::kValidation,
                  "cannot write file: " + config.output_path);
    }
    out << csv;
    std::cout << "wrote " << config.output_path << " (" << rows.size()
              << " rows)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive submodular maximization policies, exact policy "
               "oracle, and structural property checkers"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for all randomized steps");
  app.add_option("--tol", global.tol, "Comparison tolerance")
      ->capture_default_str();
  app.add_option("--support-cap", global.support_cap,
                 "Maximum materialized prior support size")
      ->capture_default_str();
  app.add_flag("--strict", global.strict,
               "Exit 4 when a property check fails");

  std::string gen_spec;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->add_option("--spec", gen_spec, "Generator descriptor (JSON)")
      ->required();
  gen->add_option("--out", gen_out, "Output path")->required();

  std::string instance_path;
  std::string constraint_text = R"({"type":"cardinality","k":2})";
  std::string policy_text;
  std::string env_spec = "all";
  auto* run = app.add_subcommand("run", "Run a policy against realizations");
  run->add_option("--instance", instance_path, "Instance file")->required();
  run->add_option("--constraint", constraint_text, "Constraint descriptor");
  run->add_option("--policy", policy_text, "Policy descriptor")->required();
  run->add_option("--env", env_spec, "Realization index or 'all'");

  std::optional<double> beta;
  bool export_trees = false;
  auto* eval = app.add_subcommand(
      "eval", "Exact robustness report against the policy oracle");
  eval->add_option("--instance", instance_path, "Instance file")->required();
  eval->add_option("--constraint", constraint_text, "Constraint descriptor");
  eval->add_option("--policy", policy_text, "Policy descriptor")->required();
  eval->add_option("--beta", beta, "Weight for the beta-robustness ratio");
  eval->add_flag("--trees", export_trees, "Include optimal decision trees");

  std::vector<std::string> properties;
  auto* check = app.add_subcommand("check", "Structural property checks");
  check->add_option("--instance", instance_path, "Instance file")->required();
  check->add_option("--properties", properties,
                    "Property names (default: all)");

  std::string config_path;
  auto* experiment =
      app.add_subcommand("experiment", "Cardinality sweep to CSV");
  experiment->add_option("--config", config_path, "Experiment config file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(global, gen_spec, gen_out);
    if (run->parsed()) {
      return cmd_run(global, instance_path, constraint_text, policy_text,
                     env_spec);
    }
    if (eval->parsed()) {
      return cmd_eval(global, instance_path, constraint_text, policy_text,
                      beta, export_trees);
    }
    if (check->parsed()) return cmd_check(global, instance_path, properties);
    if (experiment->parsed()) return cmd_experiment(global, config_path);
  } catch (const adsub::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return adsub::is_resource_error(e.code()) ? kExitResource
                                              : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
