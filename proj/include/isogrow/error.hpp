#pragma once

#include <stdexcept>
#include <string>

namespace isogrow {

enum class ErrorCode {
    CollinearInput,
    OffPlane,
    CoincidentPoints,
    OutOfDomain,
    WrongParity,
    InvalidDomain,
    DegenerateCurve,
    NonOrthogonal,
    StarOverflow,
    DegenerateTriple,
    DegenerateEdge,
    NoConvergence,
    UnknownName,
    BlowUp,
    FrameDrift,
    DegenerateMetric,
    DegeneratePlane,
    CollapsedPair,
    EmptyOverlap,
    Config,
    Io,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace isogrow
