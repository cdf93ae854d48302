#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qfs {

enum class ErrorCode {
  ZeroInverse,
  NonUnit,
  DimensionMismatch,
  FieldMismatch,
  SingularTransform,
  TooLarge,
  NonHomogeneous,
  UnknownVariable,
  BadField,
  SyntaxError,
  NonIntegral,
  PreconditionViolated,
  BudgetExhausted,
  WitnessInvalid,
  DegenerateSystem,
  SingularSeed,
  NotAZero,
  ZeroArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qfs
