#pragma once

#include <stdexcept>
#include <string>

namespace tsc {

/// Error codes for every failure mode the library reports.
enum class Errc {
    PointNotInScale,
    PointOutsideDomain,
    UnsupportedOnContinuousScale,
    DensePointWithoutAnalyticDerivative,
    EmptyDerivativeDomain,
    DomainExhausted,
    ZeroDenominator,
    LimitUnavailable,
    SignConditionViolated,
    DegenerateInterval,
    ScaleTooSmall,
    NegativeN,
    MissingDerivativeAtZero,
    OutsideRadiusOfConvergence,
    TailNotCertified,
    PrecisionUnsupported,
    InvalidScaleSpec,
    CsvFormat,
    InvalidArgument,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace tsc
