#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ellracah {

enum class ErrorKind {
  InvalidContext,
  DomainViolation,
  VirtualParamSingular,
  PoleProximity,
  InvariantViolation,
  PositivityViolation,
  DegenerateSpectrum,
  OffShell,
  ExpansionTooLarge,
  FormMismatch,
  SignPatternViolation,
  ProductIdentityViolation,
  DenominatorPoleBeforeTermination,
  ImaginaryLeak,
  NonConvergence,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. `kind()` is stable
/// and machine-readable; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

/// Raised by parameter validation. Lists every violated constraint, not just
/// the first one found.
class DomainError : public Error {
 public:
  DomainError(ErrorKind kind, std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

}  // namespace ellracah
