#pragma once

#include <stdexcept>
#include <string>

namespace opwave {

// Error taxonomy shared across the library. Each condition that callers may
// want to distinguish carries its own code; the CLI maps codes to exit status.
enum class ErrorCode {
    NotExpansive,
    NotScaledOrthogonal,
    ResolutionTooSmall,
    BadParameter,
    Diverging,
    UnsupportedScale,
    UnsupportedOperator,
    ZeroMismatch,
    SingularSample,
    SlowDecay,
    DegenerateLowerBound,
    ScaleRejected,
    IncommensurateGrid,
    NoConvergence,
    DegenerateFit,
    FormatError,
    InternalError,
    Usage,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NotExpansive: return "NotExpansive";
        case ErrorCode::NotScaledOrthogonal: return "NotScaledOrthogonal";
        case ErrorCode::ResolutionTooSmall: return "ResolutionTooSmall";
        case ErrorCode::BadParameter: return "BadParameter";
        case ErrorCode::Diverging: return "Diverging";
        case ErrorCode::UnsupportedScale: return "UnsupportedScale";
        case ErrorCode::UnsupportedOperator: return "UnsupportedOperator";
        case ErrorCode::ZeroMismatch: return "ZeroMismatch";
        case ErrorCode::SingularSample: return "SingularSample";
        case ErrorCode::SlowDecay: return "SlowDecay";
        case ErrorCode::DegenerateLowerBound: return "DegenerateLowerBound";
        case ErrorCode::ScaleRejected: return "ScaleRejected";
        case ErrorCode::IncommensurateGrid: return "IncommensurateGrid";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::DegenerateFit: return "DegenerateFit";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::InternalError: return "InternalError";
        case ErrorCode::Usage: return "Usage";
    }
    return "Unknown";
}

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
    throw Error(code, std::string(error_code_name(code)) + ": " + what);
}

} // namespace opwave
