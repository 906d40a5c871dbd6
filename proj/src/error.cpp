#include "chernflow/error.hpp"

namespace chernflow {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::VolumeNotOne: return "VolumeNotOne";
    case ErrorCode::BadResolution: return "BadResolution";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonZeroMean: return "NonZeroMean";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NonNegativeDegree: return "NonNegativeDegree";
    case ErrorCode::BadRecipe: return "BadRecipe";
    case ErrorCode::StepUnstable: return "StepUnstable";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::WrongSign: return "WrongSign";
    case ErrorCode::DegenerateF: return "DegenerateF";
    case ErrorCode::NotSignChanging: return "NotSignChanging";
    case ErrorCode::LambdaTooLarge: return "LambdaTooLarge";
    case ErrorCode::WrongDimension: return "WrongDimension";
    case ErrorCode::TooFewRecords: return "TooFewRecords";
    case ErrorCode::ZeroF: return "ZeroF";
    case ErrorCode::BadSnapshot: return "BadSnapshot";
    case ErrorCode::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace chernflow
