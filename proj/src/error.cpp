#include "polytok/error.hpp"

namespace polytok {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kDuplicateCode: return "duplicate code";
    case ErrorKind::kNotFound: return "not found";
    case ErrorKind::kIncompatibleFormat: return "incompatible format";
    case ErrorKind::kEmptyInput: return "empty input";
    case ErrorKind::kOutOfRange: return "out of range";
    case ErrorKind::kDimensionMismatch: return "dimension mismatch";
    case ErrorKind::kNeverReaches: return "never reaches threshold";
    case ErrorKind::kUnparseableVerdict: return "unparseable verdict";
    case ErrorKind::kIo: return "i/o error";
  }
  return "unknown error";
}

bool is_validation_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
    case ErrorKind::kValidation:
    case ErrorKind::kDuplicateCode:
    case ErrorKind::kNotFound:
    case ErrorKind::kIncompatibleFormat:
    case ErrorKind::kIo:
      return true;
    default:
      return false;
  }
}

}  // namespace polytok
