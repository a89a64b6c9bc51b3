#include "cwm/errors.hpp"

namespace cwm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidContamination: return "InvalidContamination";
    case ErrorCode::DegenerateDensity: return "DegenerateDensity";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::InitializationFailure: return "InitializationFailure";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::HeaderMismatch: return "HeaderMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace cwm
