#pragma once

#include <stdexcept>
#include <string>

namespace swarm_entrap {

/// Bad argument to a numeric routine (non-finite input, mismatched lengths).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Broken simulation integrity: an agent escaped the arena or sits inside an obstacle.
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario failed to parse or validate. `field` names the offending key path.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace swarm_entrap
