#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ldr/config.hpp"

namespace ldr {

// CLI exit codes.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitLp = 3;
constexpr int kExitIo = 4;

struct CliOptions {
  std::string config_path;
  std::string run_dir;             // for `report`
  std::string policy_path;         // for `simulate`
  std::optional<double> lambda;    // for `estimate`
  std::vector<double> grid;        // --grid override
  std::optional<uint64_t> seed;    // --seed override
  std::optional<int> jobs;
  std::string out_dir;             // --out override
};

int cmd_gen_scenarios(const CliOptions& opt);
int cmd_estimate(const CliOptions& opt);
int cmd_simulate(const CliOptions& opt);
int cmd_sweep(const CliOptions& opt);
int cmd_report(const CliOptions& opt);

// Maps thrown errors to the documented exit codes and prints to stderr.
int run_command(const std::string& name, const CliOptions& opt);

}  // namespace ldr
