#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nic {

/// Caller violated a precondition (bad dimensions, nonpositive constants, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent driver or problem configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Expression text could not be parsed. `position` is a 0-based offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Domain violation while evaluating an expression (sqrt of a negative, ...).
class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& what, std::string subexpression)
      : std::runtime_error(what + " in '" + subexpression + "'"),
        subexpression_(std::move(subexpression)) {}
  [[nodiscard]] const std::string& subexpression() const noexcept {
    return subexpression_;
  }

 private:
  std::string subexpression_;
};

/// A solver ran out of its node budget. Carries whatever it had found.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::vector<double> incumbent,
                double incumbent_value, double gap)
      : std::runtime_error(what),
        incumbent_(std::move(incumbent)),
        incumbent_value_(incumbent_value),
        gap_(gap) {}
  [[nodiscard]] const std::vector<double>& incumbent() const noexcept {
    return incumbent_;
  }
  [[nodiscard]] double incumbent_value() const noexcept { return incumbent_value_; }
  [[nodiscard]] double gap() const noexcept { return gap_; }

 private:
  std::vector<double> incumbent_;
  double incumbent_value_ = std::numeric_limits<double>::infinity();
  double gap_ = std::numeric_limits<double>::infinity();
};

/// The local oracle could not reach any point of the relaxed region from its
/// start. Unlike a certified infeasibility this says nothing about the region.
class InfeasibleStartError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nic
