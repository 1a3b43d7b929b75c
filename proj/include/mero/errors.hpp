#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mero {

// Base of every domain error raised by the library. The CLI maps these to
// exit code 1 (ParseError maps to 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MERO_DEFINE_ERROR(Name)            \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

MERO_DEFINE_ERROR(NotLocal);
MERO_DEFINE_ERROR(NonHomogeneousPole);
MERO_DEFINE_ERROR(EmptyWord);
MERO_DEFINE_ERROR(WordEndsInX0);
MERO_DEFINE_ERROR(ZeroCumulativeForm);
MERO_DEFINE_ERROR(NotLocalSpec);
MERO_DEFINE_ERROR(TooManyVariables);
MERO_DEFINE_ERROR(DependenceEscapesVars);
MERO_DEFINE_ERROR(DivergentIndex);
MERO_DEFINE_ERROR(NotChen);
MERO_DEFINE_ERROR(EvaluatorDomain);
MERO_DEFINE_ERROR(IncompatibleGenerators);
MERO_DEFINE_ERROR(PrecisionUnattainable);
MERO_DEFINE_ERROR(InvalidArgument);

#undef MERO_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        message_(what),
        position_(position) {}

  std::size_t position() const { return position_; }
  // The message without the position.
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t position_;
};

}  // namespace mero
