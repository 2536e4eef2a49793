#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace logcone {

enum class ErrorCode {
    InvalidGrid,
    ParseError,
    ZeroMass,
    NotNormalized,
    NotIsotropic,
    DimensionOverflow,
    DimensionMismatch,
    DimensionTooLow,
    SingularMap,
    NotOrthonormal,
    DegenerateCovariance,
    LevelOutOfRange,
    EpsOutOfRange,
    NotIdentitySum,
    NotPSD,
    InternalContractViolation,
    DiagonalConstraintViolated,
    NoConvergence,
    DeltaTooSmall,
    CovarianceContractViolated,
    BadParameters,
};

constexpr std::string_view error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ZeroMass: return "ZeroMass";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::NotIsotropic: return "NotIsotropic";
        case ErrorCode::DimensionOverflow: return "DimensionOverflow";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DimensionTooLow: return "DimensionTooLow";
        case ErrorCode::SingularMap: return "SingularMap";
        case ErrorCode::NotOrthonormal: return "NotOrthonormal";
        case ErrorCode::DegenerateCovariance: return "DegenerateCovariance";
        case ErrorCode::LevelOutOfRange: return "LevelOutOfRange";
        case ErrorCode::EpsOutOfRange: return "EpsOutOfRange";
        case ErrorCode::NotIdentitySum: return "NotIdentitySum";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::InternalContractViolation: return "InternalContractViolation";
        case ErrorCode::DiagonalConstraintViolated: return "DiagonalConstraintViolated";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::DeltaTooSmall: return "DeltaTooSmall";
        case ErrorCode::CovarianceContractViolated: return "CovarianceContractViolated";
        case ErrorCode::BadParameters: return "BadParameters";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can report it by name.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

}  // namespace logcone
