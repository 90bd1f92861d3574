#include "sqm/errors.hpp"

namespace sqm {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SubcriticalCoupling: return "SubcriticalCoupling";
    case ErrorCode::NonSingular: return "NonSingular";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::BadParameter: return "BadParameter";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::AsymptoticRegionTooClose: return "AsymptoticRegionTooClose";
    case ErrorCode::SingularRegionTooFar: return "SingularRegionTooFar";
    case ErrorCode::TurningPoint: return "TurningPoint";
    case ErrorCode::RadiusMismatch: return "RadiusMismatch";
    case ErrorCode::BalanceViolation: return "BalanceViolation";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::DriftExceeded: return "DriftExceeded";
    case ErrorCode::NoStabilization: return "NoStabilization";
    case ErrorCode::DegenerateColumns: return "DegenerateColumns";
    case ErrorCode::DegenerateTransmission: return "DegenerateTransmission";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::OutsideDisk: return "OutsideDisk";
    case ErrorCode::NonUniformGrid: return "NonUniformGrid";
    case ErrorCode::PoleOfGamma: return "PoleOfGamma";
    case ErrorCode::MalformedConfig: return "MalformedConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

}  // namespace sqm
