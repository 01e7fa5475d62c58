#ifndef SAGUIN_ERROR_HPP
#define SAGUIN_ERROR_HPP

#include <stdexcept>
#include <string>

namespace saguin {

/// Input outside the mathematical domain of an operation (negative depth, vwc >= 1, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Input inside the domain but outside a model's validity band.
class OutOfRangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Caller broke a documented precondition that is not a plain numeric domain check.
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class ScenarioInvalid : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class CalibrationInfeasible : public std::runtime_error {
public:
  CalibrationInfeasible(const std::string& what, double lo, double hi)
      : std::runtime_error(what), lower_bound_years(lo), upper_bound_years(hi) {}

  /// Lifetime range reachable by the calibration knob (years).
  double lower_bound_years;
  double upper_bound_years;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace saguin

#endif  // SAGUIN_ERROR_HPP
