#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace invforge {

enum class ErrorCode {
  ZeroInversion,
  NotCyclotomic,
  BadGaloisIndex,
  FieldMismatch,
  DimMismatch,
  SlotOutOfRange,
  DegreeMismatch,
  TypeArithmeticMismatch,
  DimensionOverflow,
  NotWellDefined,
  TargetNotLine,
  SingularMatrix,
  TypeError,
  UnsupportedField,
  BudgetExceeded,
  WrongTensorType,
  NotAGrading,
  CocycleInvalid,
  WordNotRelator,
  NotAbelian,
  MissingDecomposition,
  ParamInvalid,
  InternalCheckFailed,
  NotTaftShaped,
  ArityMismatch,
  ParseError,
  SchemaError,
  FieldError,
  UnknownCommand,
  IoError,
};

std::string_view error_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status and tests can match on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace invforge
