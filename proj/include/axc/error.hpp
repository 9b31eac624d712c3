#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace axc {

enum class ErrorKind {
  ShapeMismatch,
  NotHermitian,
  NotPSD,
  NotSolvable,
  NotSolvableHermitian,
  NotSolvablePositive,
  NotASolution,
  ParameterNotHermitian,
  ParameterNotPSD,
  PreconditionFailed,
  SingularAtZero,
  BadEpsilon,
  BadGridSize,
  Parse,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotSolvable: return "NotSolvable";
    case ErrorKind::NotSolvableHermitian: return "NotSolvableHermitian";
    case ErrorKind::NotSolvablePositive: return "NotSolvablePositive";
    case ErrorKind::NotASolution: return "NotASolution";
    case ErrorKind::ParameterNotHermitian: return "ParameterNotHermitian";
    case ErrorKind::ParameterNotPSD: return "ParameterNotPSD";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::SingularAtZero: return "SingularAtZero";
    case ErrorKind::BadEpsilon: return "BadEpsilon";
    case ErrorKind::BadGridSize: return "BadGridSize";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

/// Error raised by every axc operation. `certificate` carries the
/// quantity that failed its threshold when one exists (e.g. the range
/// residual for NotSolvable).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<double> certificate = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        certificate_(certificate) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<double> certificate() const noexcept { return certificate_; }

 private:
  ErrorKind kind_;
  std::optional<double> certificate_;
};

}  // namespace axc
