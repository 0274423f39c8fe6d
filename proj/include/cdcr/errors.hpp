#pragma once

#include <stdexcept>
#include <string>

namespace cdcr {

/// Argument outside the domain of a field (e.g. arc length beyond [0, L]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid configuration: bad parameters, unknown ids, malformed config text.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure while stepping (singular system, non-finite state).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what, long step = -1)
      : std::runtime_error(step >= 0 ? "step " + std::to_string(step) + ": " + what : what),
        step_(step) {}

  long step() const noexcept { return step_; }

 private:
  long step_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cdcr
