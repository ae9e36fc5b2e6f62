#pragma once

#include <stdexcept>
#include <string>

namespace veccomp {

// Configuration / input-validation failure (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Design is structurally impossible or degenerate for the requested function,
// e.g. an empty separation set or a decoder label collision (CLI exit code 4).
class DesignError : public std::runtime_error {
 public:
  explicit DesignError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace veccomp
