#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cwm {

enum class ErrorCode {
  NotPositiveDefinite,
  DimensionMismatch,
  InvalidContamination,
  DegenerateDensity,
  SingularDesign,
  InitializationFailure,
  KTooLarge,
  ParseError,
  NonFiniteValue,
  HeaderMismatch,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Data errors come from user input; everything else is numerical.
  bool is_data_error() const noexcept {
    return code_ == ErrorCode::ParseError || code_ == ErrorCode::NonFiniteValue ||
           code_ == ErrorCode::HeaderMismatch || code_ == ErrorCode::DimensionMismatch;
  }

 private:
  ErrorCode code_;
};

}  // namespace cwm
