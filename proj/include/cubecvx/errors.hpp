#pragma once

#include <stdexcept>
#include <string>

namespace cubecvx {

enum class ErrorCode {
    ParseError,
    MissingFace,
    DegenerateCube,
    DuplicateCube,
    DimensionExceeded,
    CoordOutOfRange,
    EmptySubcomplex,
    NotAVertex,
    VertexNotInSubcomplex,
    NotASubcomplex,
    NotConnected,
    PreconditionNotCAT0,
    PreconditionFailed,
    NotInClosedStar,
    InconsistentCarriers,
    SelfIntersecting,
    SageevViolation,
    TooFine,
    Unreachable,
    BadSpec,
    BadArgument,
    Internal,
};

const char* error_code_name(ErrorCode code);

/// Toolkit exception; `code()` matches the per-operation error contracts.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace cubecvx
