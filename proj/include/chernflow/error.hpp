#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chernflow {

enum class ErrorCode {
  VolumeNotOne,
  BadResolution,
  GridMismatch,
  NonFinite,
  NonZeroMean,
  TooLarge,
  NonNegativeDegree,
  BadRecipe,
  StepUnstable,
  StepFailure,
  WrongSign,
  DegenerateF,
  NotSignChanging,
  LambdaTooLarge,
  WrongDimension,
  TooFewRecords,
  ZeroF,
  BadSnapshot,
  BadConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// message is prefixed with the code name.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace chernflow
