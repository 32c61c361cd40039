#pragma once

#include <stdexcept>
#include <string>

namespace envwit {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define ENVWIT_ERROR(Name)                                   \
  class Name : public Error {                                \
  public:                                                    \
    explicit Name(const std::string& what) : Error(what) {}  \
  }

ENVWIT_ERROR(NonUnitaryInput);
ENVWIT_ERROR(OutcomeOutOfRange);
ENVWIT_ERROR(DimensionMismatch);
ENVWIT_ERROR(NotAnInstrument);
ENVWIT_ERROR(TooManyOutcomes);
ENVWIT_ERROR(Overflow);
ENVWIT_ERROR(SizeMismatch);
ENVWIT_ERROR(EmptyType);
ENVWIT_ERROR(IntractableSize);
ENVWIT_ERROR(IoError);
ENVWIT_ERROR(ComplexNotRealified);
ENVWIT_ERROR(SolverUnavailable);
ENVWIT_ERROR(NoReduction);
ENVWIT_ERROR(InvalidArgument);

#undef ENVWIT_ERROR

}  // namespace envwit
