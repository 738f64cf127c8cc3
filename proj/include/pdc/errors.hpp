#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pdc {

/// Input outside the domain of a physical model (wavelength window, evanescent mode).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A requested mode does not propagate (|q| exceeds the wavenumber).
class NonPropagatingError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Quadrature, root finding or Monte Carlo failed to produce a usable number.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration rejected; carries every offending key.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> issues);

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

}  // namespace pdc
