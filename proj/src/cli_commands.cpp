#include "ldr/cli_commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ldr/errors.hpp"
#include "ldr/fixtures.hpp"
#include "ldr/util.hpp"
#include "json.hpp"

namespace ldr {

namespace {

namespace fs = std::filesystem;

RunConfig prepare_config(const CliOptions& opt) {
  if (opt.config_path.empty()) throw ConfigError("--config is required");
  RunConfig cfg = load_run_config(opt.config_path);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.jobs) cfg.jobs = *opt.jobs;
  if (!opt.grid.empty()) cfg.grid = opt.grid;
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  return cfg;
}

std::string out_path(const RunConfig& cfg, const std::string& file) {
  return (fs::path(cfg.resolve(cfg.out_dir)) / file).string();
}

void append_estimation_log(const RunConfig& cfg, double lambda, const EstimateInfo& info) {
  nlohmann::json j{{"lambda", lambda},
                   {"solve_seconds", info.solve_seconds},
                   {"objective", info.objective},
                   {"operational_cost", info.operational_cost},
                   {"penalty_value", info.penalty_value},
                   {"nonzero_count", info.nonzero_count}};
  std::string path = out_path(cfg, "estimation_log.jsonl");
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot open " + path);
  out << j.dump() << "\n";
}

LdrPolicy estimate_theta0(const RunConfig& cfg, const HydroSystem& sys,
                          const ScenarioSet& scen_in) {
  std::string base_path = out_path(cfg, "theta_l0.csv");
  if (fs::exists(base_path) && fs::exists(base_path + ".meta.json")) {
    LdrPolicy p = load_policy(base_path);
    if (p.lambda == 0.0 && p.index.size() == index_set(sys, cfg.basis).size()) return p;
  }
  EstimateInfo info;
  LdrPolicy p = estimate(sys, scen_in, cfg.basis, 0.0, nullptr, &info);
  save_policy(p, base_path);
  append_estimation_log(cfg, 0.0, info);
  return p;
}

}  // namespace

int cmd_gen_scenarios(const CliOptions& opt) {
  RunConfig cfg = prepare_config(opt);
  ScenarioSet in = load_in_scenarios(cfg);
  ScenarioSet out = load_out_scenarios(cfg);
  save_scenarios_csv(in, out_path(cfg, "scenarios_in.csv"));
  save_scenarios_csv(out, out_path(cfg, "scenarios_out.csv"));
  std::cout << "wrote " << in.n_scenarios << " in-sample and " << out.n_scenarios
            << " out-of-sample scenarios to " << cfg.resolve(cfg.out_dir) << "\n";
  return kExitOk;
}

int cmd_estimate(const CliOptions& opt) {
  RunConfig cfg = prepare_config(opt);
  double lambda = opt.lambda.value_or(0.0);
  if (lambda < 0) throw ConfigError("--lambda must be >= 0");
  HydroSystem sys = load_system_file(cfg.resolve(cfg.system_file));
  ScenarioSet scen_in = load_in_scenarios(cfg);

  LdrPolicy policy;
  if (lambda == 0.0) {
    EstimateInfo info;
    policy = estimate(sys, scen_in, cfg.basis, 0.0, nullptr, &info);
    save_policy(policy, out_path(cfg, "theta_l0.csv"));
    append_estimation_log(cfg, 0.0, info);
  } else {
    LdrPolicy theta0 = estimate_theta0(cfg, sys, scen_in);  // weights dependency
    AdalassoWeights w = adalasso_weights(theta0);
    EstimateInfo info;
    policy = estimate(sys, scen_in, cfg.basis, lambda, &w, &info);
    save_policy(policy, out_path(cfg, "theta_l" + lambda_tag(lambda) + ".csv"));
    append_estimation_log(cfg, lambda, info);
  }
  std::cout << "estimated lambda=" << lambda_tag(lambda)
            << " in_sample_cost=" << format_double(policy.in_sample_cost) << "\n";
  return kExitOk;
}

int cmd_simulate(const CliOptions& opt) {
  RunConfig cfg = prepare_config(opt);
  if (opt.policy_path.empty()) throw ConfigError("--policy is required for simulate");
  if (!fs::exists(opt.policy_path)) throw IoError("policy file not found: " + opt.policy_path);
  HydroSystem sys = load_system_file(cfg.resolve(cfg.system_file));
  LdrPolicy policy = load_policy(opt.policy_path);
  ScenarioSet scen_out = load_out_scenarios(cfg);

  SttConfig stt_cfg = cfg.stt;
  stt_cfg.jobs = cfg.jobs;
  stt_cfg.keep_decisions = true;
  SimulationResult sim = simulate(sys, policy, scen_out, stt_cfg);

  std::string tag = lambda_tag(policy.lambda);
  save_cost_summary_csv(sim, out_path(cfg, "sim_costs_l" + tag + ".csv"));
  save_simulation_csv(sim, out_path(cfg, "sim_long_l" + tag + ".csv"));
  std::cout << "z_M=" << format_double(sim.z_M) << " over " << sim.n_scenarios
            << " scenarios\n";
  return kExitOk;
}

int cmd_sweep(const CliOptions& opt) {
  RunConfig cfg = prepare_config(opt);
  HydroSystem sys = load_system_file(cfg.resolve(cfg.system_file));
  ScenarioSet scen_in = load_in_scenarios(cfg);
  ScenarioSet scen_out = load_out_scenarios(cfg);

  SweepConfig sc;
  sc.stt = cfg.stt;
  sc.jobs = cfg.jobs;
  sc.on_policy = [&](const SweepRow& row, const LdrPolicy& policy, const SimulationResult& sim) {
    std::string tag = lambda_tag(row.lambda);
    save_policy(policy, out_path(cfg, "theta_l" + tag + ".csv"));
    save_cost_summary_csv(sim, out_path(cfg, "sim_costs_l" + tag + ".csv"));
    EstimateInfo info;
    info.solve_seconds = row.estimate_seconds;
    info.operational_cost = row.in_sample_cost;
    info.objective = row.in_sample_cost + row.lambda * row.weighted_l1;
    info.penalty_value = row.lambda * row.weighted_l1;
    info.nonzero_count = 0;
    for (size_t i = 0; i < policy.index.size(); ++i)
      if (policy.index[i].k > 0 && std::abs(policy.theta[i]) > kZeroTol) ++info.nonzero_count;
    append_estimation_log(cfg, row.lambda, info);
  };

  SweepReport report = sweep(sys, scen_in, scen_out, cfg.basis, cfg.grid, sc);
  save_sweep_csv(report, out_path(cfg, "sweep_report.csv"));
  save_sweep_json(report, out_path(cfg, "sweep_report.json"));
  std::cout << "selected lambda=" << lambda_tag(report.selected_lambda)
            << " gain=" << format_double(report.gain) << "\n";
  return kExitOk;
}

int cmd_report(const CliOptions& opt) {
  std::string dir = opt.run_dir.empty() ? opt.out_dir : opt.run_dir;
  if (dir.empty()) throw ConfigError("report: --run-dir is required");
  if (!fs::exists(dir)) throw IoError("report: directory not found: " + dir);

  // gather per-lambda artifacts
  std::vector<std::pair<double, std::string>> policies;  // (lambda, path)
  for (const auto& e : fs::directory_iterator(dir)) {
    std::string name = e.path().filename().string();
    if (name.rfind("theta_l", 0) == 0 && name.size() > 11 &&
        name.substr(name.size() - 4) == ".csv") {
      std::string tag = name.substr(7, name.size() - 11);
      try {
        policies.emplace_back(std::stod(tag), e.path().string());
      } catch (const std::exception&) {
        continue;
      }
    }
  }
  if (policies.empty())
    throw ConfigError("report: no policy files (theta_l*.csv) in " + dir);
  std::sort(policies.begin(), policies.end());

  nlohmann::json report;
  std::ostringstream cost_csv, sparsity_csv;
  cost_csv << "lambda,mean,P5,P95,spread\n";
  sparsity_csv << "lambda,nonzero_fraction,l1_shrinkage\n";

  const LdrPolicy* theta0 = nullptr;
  std::vector<LdrPolicy> loaded;
  loaded.reserve(policies.size());
  for (const auto& [lambda, path] : policies) loaded.push_back(load_policy(path));
  for (size_t i = 0; i < policies.size(); ++i)
    if (policies[i].first == 0.0) theta0 = &loaded[i];

  for (size_t i = 0; i < policies.size(); ++i) {
    double lambda = policies[i].first;
    nlohmann::json entry{{"lambda", lambda}, {"in_sample_cost", loaded[i].in_sample_cost}};

    std::string costs_path = dir + "/sim_costs_l" + lambda_tag(lambda) + ".csv";
    if (fs::exists(costs_path)) {
      std::istringstream in(read_file(costs_path));
      std::string line;
      std::getline(in, line);
      std::vector<double> costs;
      while (std::getline(in, line)) {
        auto parts = split(trim(line), ',');
        if (parts.size() == 2) costs.push_back(std::stod(parts[1]));
      }
      if (!costs.empty()) {
        CostMetrics cm = cost_metrics(costs);
        entry["cost"] = {{"mean", cm.mean}, {"P5", cm.p5}, {"P95", cm.p95}, {"spread", cm.spread}};
        cost_csv << format_double(lambda) << ',' << format_double(cm.mean) << ','
                 << format_double(cm.p5) << ',' << format_double(cm.p95) << ','
                 << format_double(cm.spread) << '\n';
      }
    }
    if (theta0) {
      SparsityMetrics sm = sparsity_metrics(loaded[i], *theta0);
      entry["sparsity"] = {{"nonzero_fraction", sm.nonzero_fraction},
                           {"l1_shrinkage", sm.l1_shrinkage}};
      sparsity_csv << format_double(lambda) << ',' << format_double(sm.nonzero_fraction) << ','
                   << format_double(sm.l1_shrinkage) << '\n';
    }
    report["policies"].push_back(entry);
  }

  std::string sweep_json = dir + "/sweep_report.json";
  if (fs::exists(sweep_json)) {
    try {
      report["sweep"] = nlohmann::json::parse(read_file(sweep_json));
    } catch (const nlohmann::json::exception&) {
    }
  }

  atomic_write_file(dir + "/report.json", report.dump(2) + "\n");
  atomic_write_file(dir + "/report_cost_metrics.csv", cost_csv.str());
  atomic_write_file(dir + "/report_sparsity.csv", sparsity_csv.str());
  std::cout << "report written to " << dir << "/report.json\n";
  return kExitOk;
}

int run_command(const std::string& name, const CliOptions& opt) {
  try {
    if (name == "gen-scenarios") return cmd_gen_scenarios(opt);
    if (name == "estimate") return cmd_estimate(opt);
    if (name == "simulate") return cmd_simulate(opt);
    if (name == "sweep") return cmd_sweep(opt);
    if (name == "report") return cmd_report(opt);
    std::cerr << "unknown command: " << name << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const LpFailure& e) {
    std::cerr << "LP failure: " << e.what() << "\n";
    return kExitLp;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ldr
