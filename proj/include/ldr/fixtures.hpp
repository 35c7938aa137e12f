#pragma once

#include <string>

#include "ldr/config.hpp"

namespace ldr {

// A bundled case study: parsed run config plus the loaded system/process.
struct CaseFixture {
  std::string name;
  std::string dir;
  RunConfig run;
  HydroSystem system;
  ScenarioProcessSpec process;
  std::string notes;  // fixture conventions for values the tables leave open
};

// Root of the bundled fixtures. Resolution order: LDR_FIXTURE_DIR env var,
// compile-time source path, ./fixtures.
std::string fixture_root();

// name in {case1, case2, micro}; throws ConfigError for unknown names and
// surfaces validate_system violations as errors.
CaseFixture load_fixture(const std::string& name);

}  // namespace ldr
