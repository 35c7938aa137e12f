#include "ldr/fixtures.hpp"

#include <cstdlib>
#include <filesystem>

#include "ldr/errors.hpp"
#include "ldr/util.hpp"

#ifndef LDR_FIXTURE_DIR
#define LDR_FIXTURE_DIR ""
#endif

namespace ldr {

std::string fixture_root() {
  if (const char* env = std::getenv("LDR_FIXTURE_DIR")) return env;
  std::string compiled = LDR_FIXTURE_DIR;
  if (!compiled.empty() && std::filesystem::exists(compiled)) return compiled;
  return "fixtures";
}

CaseFixture load_fixture(const std::string& name) {
  if (name != "case1" && name != "case2" && name != "micro")
    throw ConfigError("unknown fixture '" + name + "' (known: case1, case2, micro)");
  CaseFixture fx;
  fx.name = name;
  fx.dir = (std::filesystem::path(fixture_root()) / name).string();
  std::string run_path = fx.dir + "/run.config";
  if (!std::filesystem::exists(run_path))
    throw ConfigError("fixture file missing: " + run_path);
  fx.run = load_run_config(run_path);
  fx.system = load_system_file(fx.run.resolve(fx.run.system_file));
  fx.process = load_scenario_spec(fx.run.resolve(fx.run.scenario_spec_file));
  std::string notes_path = fx.dir + "/NOTES.md";
  if (std::filesystem::exists(notes_path)) fx.notes = read_file(notes_path);

  auto violations = validate_system(fx.system);
  if (!violations.empty())
    throw ConfigError("fixture '" + name + "' fails validation: " + violations[0].code + ": " +
                      violations[0].message);
  return fx;
}

}  // namespace ldr
