#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace conespectra {

enum class ErrorCode {
  InvalidArgument,
  NotSymmetric,
  SingularMatrix,
  NotPositiveDefinite,
  DimensionTooLarge,
  DegenerateCone,
  PointInCone,
  KernelMeetsCone,
  NotInvariant,
  NonConvergence,
  LeftCone,
  NegativeEntry,
  SingularShift,
  NotInCone,
  NotParallel,
  NotSelfadjoint,
  ZeroPolynomial,
  GcdIllConditioned,
  NotPSD,
  NotADivisor,
  InconsistentDimension,
  Diverged,
  IntervalTooSmall,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::DegenerateCone: return "DegenerateCone";
    case ErrorCode::PointInCone: return "PointInCone";
    case ErrorCode::KernelMeetsCone: return "KernelMeetsCone";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::LeftCone: return "LeftCone";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::NotInCone: return "NotInCone";
    case ErrorCode::NotParallel: return "NotParallel";
    case ErrorCode::NotSelfadjoint: return "NotSelfadjoint";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::GcdIllConditioned: return "GcdIllConditioned";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotADivisor: return "NotADivisor";
    case ErrorCode::InconsistentDimension: return "InconsistentDimension";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::IntervalTooSmall: return "IntervalTooSmall";
  }
  return "Unknown";
}

}  // namespace conespectra
