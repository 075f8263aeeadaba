#pragma once

#include <stdexcept>
#include <string>

namespace citenet {

/// Base of every error raised by the library. The CLI maps any of these to a
/// nonzero exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define CITENET_DEFINE_ERROR(Name)          \
    class Name : public Error {             \
    public:                                 \
        using Error::Error;                 \
    };

CITENET_DEFINE_ERROR(MalformedPatternError)
CITENET_DEFINE_ERROR(InvalidQueryError)
CITENET_DEFINE_ERROR(QueryRejectedError)
CITENET_DEFINE_ERROR(TransientFailureError)
CITENET_DEFINE_ERROR(DecodeError)
CITENET_DEFINE_ERROR(AbstractConflictError)
CITENET_DEFINE_ERROR(BudgetExceededError)
CITENET_DEFINE_ERROR(LoadError)
CITENET_DEFINE_ERROR(FieldError)
CITENET_DEFINE_ERROR(SerializationError)
CITENET_DEFINE_ERROR(ConvergenceError)
CITENET_DEFINE_ERROR(ParameterError)
CITENET_DEFINE_ERROR(NumericError)
CITENET_DEFINE_ERROR(IoError)

#undef CITENET_DEFINE_ERROR

} // namespace citenet
