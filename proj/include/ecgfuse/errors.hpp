// errors.hpp - exception hierarchy. Every failure the library can raise has a
// distinct type so callers can catch precisely; all derive from Error.
#pragma once

#include <stdexcept>
#include <string>

namespace ecgfuse {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define ECGFUSE_DEFINE_ERROR(Name)                       \
    struct Name : Error {                                \
        explicit Name(const std::string& what_arg)       \
            : Error(std::string(#Name) + ": " + what_arg) {} \
    }

// series / embedding
ECGFUSE_DEFINE_ERROR(SeriesTooShort);
ECGFUSE_DEFINE_ERROR(NonFiniteSample);
ECGFUSE_DEFINE_ERROR(SeriesDegenerate);
ECGFUSE_DEFINE_ERROR(EmptyInput);
ECGFUSE_DEFINE_ERROR(IndexOutOfRange);

// fuzzy inference
ECGFUSE_DEFINE_ERROR(ZeroActivation);

// prediction / fusion
ECGFUSE_DEFINE_ERROR(NotEnoughStates);
ECGFUSE_DEFINE_ERROR(DimensionMismatch);
ECGFUSE_DEFINE_ERROR(TooFewTrajectories);
ECGFUSE_DEFINE_ERROR(NonFiniteState);
ECGFUSE_DEFINE_ERROR(TooFewStates);

// lead preparation
ECGFUSE_DEFINE_ERROR(MissingLead);
ECGFUSE_DEFINE_ERROR(LeadOrderMismatch);

// synthesis / noise
ECGFUSE_DEFINE_ERROR(IntegrationUnstable);
ECGFUSE_DEFINE_ERROR(ZeroNoisePower);
ECGFUSE_DEFINE_ERROR(ZeroSignalPower);
ECGFUSE_DEFINE_ERROR(SegmentTooShort);

// record I/O
ECGFUSE_DEFINE_ERROR(ParseError);
ECGFUSE_DEFINE_ERROR(RaggedRows);
ECGFUSE_DEFINE_ERROR(MissingHeader);
ECGFUSE_DEFINE_ERROR(IoError);
ECGFUSE_DEFINE_ERROR(EmptyTrajectory);
ECGFUSE_DEFINE_ERROR(WindowLargerThanRecord);

#undef ECGFUSE_DEFINE_ERROR

}  // namespace ecgfuse
