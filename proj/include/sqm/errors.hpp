#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sqm {

enum class ErrorCode {
  // model
  SubcriticalCoupling,
  NonSingular,
  BadGrid,
  BadParameter,
  DomainError,
  // bases
  AsymptoticRegionTooClose,
  SingularRegionTooFar,
  TurningPoint,
  // currents
  RadiusMismatch,
  BalanceViolation,
  // integrate
  StepUnderflow,
  DriftExceeded,
  // connect
  NoStabilization,
  DegenerateColumns,
  DegenerateTransmission,
  PoleProximity,
  // disk
  RankDeficient,
  OutsideDisk,
  NonUniformGrid,
  // oracle
  PoleOfGamma,
  // cli
  MalformedConfig,
};

/// Stable identifier used in diagnostics and reports, e.g. "SubcriticalCoupling".
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace sqm
