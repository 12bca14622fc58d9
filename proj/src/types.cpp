#include "stabcert/types.hpp"

namespace stabcert {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::unknown_name: return "unknown_name";
    case ErrorCode::algorithm_failure: return "algorithm_failure";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

}  // namespace stabcert
