#pragma once

#include <stdexcept>
#include <string>

namespace ldr {

// Config/input errors map to CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// LP construction/solve failures map to CLI exit code 3.
struct LpFailure : std::runtime_error {
  explicit LpFailure(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem problems map to CLI exit code 4.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ldr
