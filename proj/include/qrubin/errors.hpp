#pragma once

#include <stdexcept>
#include <string>

namespace qrubin {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QRUBIN_ERROR(Name)                      \
  class Name : public Error {                   \
   public:                                      \
    using Error::Error;                         \
  }

QRUBIN_ERROR(DomainError);
QRUBIN_ERROR(TruncationNotConverged);
QRUBIN_ERROR(MissingValue);
QRUBIN_ERROR(NotQRegular);
QRUBIN_ERROR(ParityError);
QRUBIN_ERROR(TailNotNegligible);
QRUBIN_ERROR(EvaluationError);
QRUBIN_ERROR(NotContracting);
QRUBIN_ERROR(MaxIterations);
QRUBIN_ERROR(SingularFactor);
QRUBIN_ERROR(ParseError);

#undef QRUBIN_ERROR

}  // namespace qrubin
