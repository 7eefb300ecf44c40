#include "ellracah/error.hpp"

namespace ellracah {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidContext: return "InvalidContext";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::VirtualParamSingular: return "VirtualParamSingular";
    case ErrorKind::PoleProximity: return "PoleProximity";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::PositivityViolation: return "PositivityViolation";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::OffShell: return "OffShell";
    case ErrorKind::ExpansionTooLarge: return "ExpansionTooLarge";
    case ErrorKind::FormMismatch: return "FormMismatch";
    case ErrorKind::SignPatternViolation: return "SignPatternViolation";
    case ErrorKind::ProductIdentityViolation: return "ProductIdentityViolation";
    case ErrorKind::DenominatorPoleBeforeTermination: return "DenominatorPoleBeforeTermination";
    case ErrorKind::ImaginaryLeak: return "ImaginaryLeak";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += "; ";
    out += item;
  }
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
      kind_(kind),
      detail_(detail) {}

DomainError::DomainError(ErrorKind kind, std::vector<std::string> violations)
    : Error(kind, join(violations)), violations_(std::move(violations)) {}

}  // namespace ellracah
