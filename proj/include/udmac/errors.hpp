#pragma once

#include <stdexcept>
#include <string>

namespace udmac {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of an operation
// (d <= r, t < 0, Pc >= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A configuration or sweep description failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Payload violates E[P] <= T_s * M * r_tr.
class AdmissibilityError : public ConfigError {
 public:
  AdmissibilityError(double payload_bits, double bound_bits);

  double payload_bits() const { return payload_bits_; }
  double bound_bits() const { return bound_bits_; }

 private:
  double payload_bits_;
  double bound_bits_;
};

// A fixed-point solve did not reach its tolerance within the iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual);

  double residual() const { return residual_; }

 private:
  double residual_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace udmac
