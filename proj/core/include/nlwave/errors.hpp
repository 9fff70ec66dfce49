#pragma once

#include <stdexcept>
#include <string>

namespace nlwave {

/// Invalid user-facing configuration (bad grid, unknown kernel name, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke an operation's precondition (mismatched grids, bad parity tag).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Input outside the mathematical domain of a formula (e.g. the pole of P_min at D = 3).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Requested time lies outside a sampled series.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A probe ratio has a vanishing denominator.
class UndefinedRatio : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// K is not invertible on the resolved band.
class NonElliptic : public std::runtime_error {
 public:
  NonElliptic(const std::string& what, double wavenumber, double symbol_value)
      : std::runtime_error(what), wavenumber_(wavenumber), symbol_value_(symbol_value) {}

  double wavenumber() const noexcept { return wavenumber_; }
  double symbol_value() const noexcept { return symbol_value_; }

 private:
  double wavenumber_;
  double symbol_value_;
};

/// A non-finite sample appeared during time stepping.
class BlowupDetected : public std::runtime_error {
 public:
  BlowupDetected(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}

  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// The quadratic energy became indefinite (1 + eps^p w lost positivity in the mean).
class HyperbolicityLost : public std::runtime_error {
 public:
  HyperbolicityLost(const std::string& what, double energy_squared)
      : std::runtime_error(what), energy_squared_(energy_squared) {}

  double energy_squared() const noexcept { return energy_squared_; }

 private:
  double energy_squared_;
};

}  // namespace nlwave
