#pragma once

#include <stdexcept>
#include <string>

namespace polytok {

enum class ErrorKind {
  kParse,
  kValidation,
  kDuplicateCode,
  kNotFound,
  kIncompatibleFormat,
  kEmptyInput,
  kOutOfRange,
  kDimensionMismatch,
  kNeverReaches,
  kUnparseableVerdict,
  kIo,
};

const char* to_string(ErrorKind kind);

// True for errors caused by bad inputs or flags rather than by a failed computation.
bool is_validation_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace polytok
