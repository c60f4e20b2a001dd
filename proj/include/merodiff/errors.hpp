#ifndef MERODIFF_ERRORS_HPP
#define MERODIFF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace merodiff {

enum class ErrorCode {
  PoleHit,
  PrecisionLoss,
  Overflow,
  Unknowable,
  BoundaryHit,
  NonConvergent,
  PoleOnCircle,
  ZeroOnCircle,
  NoAdmissibleRadius,
  IncompleteRegistry,
  DivergentEpsilonSum,
  NoZeros,
  WindowTooShort,
  PoleInDisk,
  DegenerateZero,
  IdentityFailure,
  InsufficientGrid,
  AllExcluded,
  ConfigError,
  UnknownReport,
  DomainError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::PrecisionLoss: return "PrecisionLoss";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::Unknowable: return "Unknowable";
    case ErrorCode::BoundaryHit: return "BoundaryHit";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::PoleOnCircle: return "PoleOnCircle";
    case ErrorCode::ZeroOnCircle: return "ZeroOnCircle";
    case ErrorCode::NoAdmissibleRadius: return "NoAdmissibleRadius";
    case ErrorCode::IncompleteRegistry: return "IncompleteRegistry";
    case ErrorCode::DivergentEpsilonSum: return "DivergentEpsilonSum";
    case ErrorCode::NoZeros: return "NoZeros";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::PoleInDisk: return "PoleInDisk";
    case ErrorCode::DegenerateZero: return "DegenerateZero";
    case ErrorCode::IdentityFailure: return "IdentityFailure";
    case ErrorCode::InsufficientGrid: return "InsufficientGrid";
    case ErrorCode::AllExcluded: return "AllExcluded";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::UnknownReport: return "UnknownReport";
    case ErrorCode::DomainError: return "DomainError";
  }
  return "Error";
}

class MeroError : public std::runtime_error {
 public:
  MeroError(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + msg),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw MeroError(code, msg);
}

}  // namespace merodiff

#endif
