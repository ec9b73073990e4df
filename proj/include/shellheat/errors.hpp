#pragma once

#include <stdexcept>
#include <string>

namespace shellheat {

// Exit codes used by the CLI. Library code throws the exception types below;
// tools/shellheat.cpp maps them onto this table.
enum class ExitCode : int {
  ok = 0,
  internal = 1,
  config_missing = 2,
  config_parse = 3,
  config_invalid = 4,
  numeric = 5,
  io = 6,
  usage = 7,
};

/// Invalid argument to a model operation (non-positive coefficient, shape
/// mismatch, out-of-range position, ...).
class param_error : public std::invalid_argument {
public:
  explicit param_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Numerical failure during time stepping (singular system, non-finite state).
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Config loading failures, one type per exit code.
class config_missing_error : public std::runtime_error {
public:
  explicit config_missing_error(const std::string& msg) : std::runtime_error(msg) {}
};

class config_parse_error : public std::runtime_error {
public:
  explicit config_parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

class config_invalid_error : public std::runtime_error {
public:
  explicit config_invalid_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace shellheat
