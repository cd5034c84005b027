#pragma once

#include <stdexcept>
#include <string>

namespace alsim {

// Non-finite or otherwise unusable kinematic input.
struct InvalidStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally invalid rule set.
struct StrategyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration value; carries the offending field name.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& field, const std::string& detail = "")
      : std::runtime_error(detail.empty() ? "config error: " + field
                                          : "config error: " + field + ": " + detail),
        field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed CSV or persisted file; carries the 1-based line number.
struct FormatError : std::runtime_error {
  FormatError(long line, const std::string& detail)
      : std::runtime_error("line " + std::to_string(line) + ": " + detail), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace alsim
