#pragma once

#include <stdexcept>
#include <string>

namespace boundcoh {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define BOUNDCOH_DEFINE_ERROR(Name)                 \
    class Name : public Error {                     \
    public:                                         \
        explicit Name(const std::string& what)      \
            : Error(#Name ": " + what) {}           \
    }

// Geometry
BOUNDCOH_DEFINE_ERROR(DegenerateTuple);
BOUNDCOH_DEFINE_ERROR(SingularMatrix);
BOUNDCOH_DEFINE_ERROR(MixedModels);
BOUNDCOH_DEFINE_ERROR(SignatureError);
BOUNDCOH_DEFINE_ERROR(NotOpposite);
BOUNDCOH_DEFINE_ERROR(NotGeneric);
BOUNDCOH_DEFINE_ERROR(InvalidArgument);

// Cochains and sampling
BOUNDCOH_DEFINE_ERROR(ArityTooLarge);
BOUNDCOH_DEFINE_ERROR(SamplerExhausted);

// Certifier
BOUNDCOH_DEFINE_ERROR(DegenerateArguments);
BOUNDCOH_DEFINE_ERROR(UnboundedDefect);
BOUNDCOH_DEFINE_ERROR(EvaluationError);
BOUNDCOH_DEFINE_ERROR(IterationOverflow);
BOUNDCOH_DEFINE_ERROR(MissingAlternation);

// Reports
BOUNDCOH_DEFINE_ERROR(UnknownInvariant);
BOUNDCOH_DEFINE_ERROR(IoError);

#undef BOUNDCOH_DEFINE_ERROR

} // namespace boundcoh
