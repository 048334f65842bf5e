#include "streamrelay/error.hpp"

namespace streamrelay {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ZeroInverse: return "ZeroInverse";
    case ErrorCode::FieldTooSmall: return "FieldTooSmall";
    case ErrorCode::IndivisibleParity: return "IndivisibleParity";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::RelayCapacityExceeded: return "RelayCapacityExceeded";
    case ErrorCode::ParameterMismatch: return "ParameterMismatch";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace streamrelay
