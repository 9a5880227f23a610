#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace anderson {

/// Enumeration or construction ran past its configured work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, long last_completed)
      : std::runtime_error(what), last_completed_(last_completed) {}

  /// Largest size (walk length, vertex count, ...) fully processed before
  /// the budget ran out; -1 when nothing completed.
  long last_completed() const noexcept { return last_completed_; }

 private:
  long last_completed_;
};

/// A query touched vertices whose neighborhoods were cut by truncation.
class OutsideCleanRegion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear solve, eigensolver or quadrature did not meet its accuracy target.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(const std::string& what, long trial = -1, double residual = 0.0)
      : std::runtime_error(what), trial_(trial), residual_(residual) {}

  long trial() const noexcept { return trial_; }
  double residual() const noexcept { return residual_; }

 private:
  long trial_;
  double residual_;
};

/// Malformed configuration; carries the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string key = {}, int line = 0)
      : std::runtime_error(what), key_(std::move(key)), line_(line) {}

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }

 private:
  std::string key_;
  int line_;
};

}  // namespace anderson
