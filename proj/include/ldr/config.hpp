#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ldr/analytics.hpp"
#include "ldr/scenario.hpp"
#include "ldr/system.hpp"

namespace ldr {

// Minimal structured-text reader: [section], [[table]] arrays, key = value
// with numbers, strings, booleans and flat arrays. Enough for the system,
// scenario and run files; errors carry line numbers.
struct ConfigValue {
  std::variant<double, bool, std::string, std::vector<double>, std::vector<std::string>> v;
  int line = 0;

  double as_number(const std::string& key) const;
  int as_int(const std::string& key) const;
  bool as_bool(const std::string& key) const;
  const std::string& as_string(const std::string& key) const;
  std::vector<double> as_number_array(const std::string& key) const;
};

struct ConfigSection {
  std::string name;
  int line = 0;
  std::map<std::string, ConfigValue> values;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  const ConfigValue& at(const std::string& key) const;  // ConfigError if missing
};

struct ConfigFile {
  std::string path;
  std::vector<ConfigSection> sections;  // in file order; [[x]] repeats the name

  const ConfigSection* find(const std::string& name) const;
  std::vector<const ConfigSection*> find_all(const std::string& name) const;
};

ConfigFile parse_config_text(const std::string& text, const std::string& path_for_errors);
ConfigFile load_config_file(const std::string& path);

// [system] + [[hydro]] + [[thermal]] (+ optional [[bus]], [[line]]) sections.
HydroSystem load_system_file(const std::string& path);
void save_system_file(const HydroSystem& system, const std::string& path);

// [[reservoir]] sections with monthly_mean, monthly_std, ar1, history.
ScenarioProcessSpec load_scenario_spec(const std::string& path);
void save_scenario_spec(const ScenarioProcessSpec& spec, const std::string& path);

// Full run description consumed by the CLI commands.
struct RunConfig {
  std::string config_dir;    // directory of the run file; relative paths resolve here
  std::string system_file;
  std::string scenario_spec_file;  // either a process spec ...
  std::string in_csv, out_csv;     // ... or pre-generated scenario CSVs
  int n_in = 0, n_out = 0;
  uint64_t seed = 0;
  std::string out_dir = "out";
  BasisConfig basis;
  std::vector<double> grid;  // lambda grid; empty = default_lambda_grid()
  SttConfig stt;
  int central_window_first = 0, central_window_last = 0;  // 0,0 = auto (central year)
  int jobs = 1;

  std::string resolve(const std::string& rel) const;
};

RunConfig load_run_config(const std::string& path);

// In-sample / out-of-sample scenario sets per the run config (generated from
// the spec with seed / seed+1, or loaded from the CSVs).
ScenarioSet load_in_scenarios(const RunConfig& cfg);
ScenarioSet load_out_scenarios(const RunConfig& cfg);

}  // namespace ldr
