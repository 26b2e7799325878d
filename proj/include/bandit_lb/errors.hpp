#pragma once

#include <stdexcept>
#include <string>

namespace bandit_lb {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two objects that must live in the same family or model do not.
class ModelMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke a sequencing contract (e.g. update for an arm that was not chosen).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Experiment configuration could not be parsed or resolved.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bound was requested for a problem that does not meet its preconditions.
class IncompatibleBound : public std::runtime_error {
 public:
  IncompatibleBound(std::string bound_id, const std::string& reason)
      : std::runtime_error(bound_id + ": " + reason), bound_id_(std::move(bound_id)) {}
  const std::string& bound_id() const noexcept { return bound_id_; }

 private:
  std::string bound_id_;
};

/// A simulated run failed; carries the run index within a Monte Carlo batch.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::size_t run_index, const std::string& what)
      : std::runtime_error("run " + std::to_string(run_index) + ": " + what), run_index_(run_index) {}
  std::size_t run_index() const noexcept { return run_index_; }

 private:
  std::size_t run_index_;
};

/// Enumeration would exceed the row cap, or the strategy cannot be discretized exactly.
class EnumerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bandit_lb
