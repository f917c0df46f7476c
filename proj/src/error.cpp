#include "tsc/error.hpp"

namespace tsc {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::PointNotInScale: return "PointNotInScale";
    case Errc::PointOutsideDomain: return "PointOutsideDomain";
    case Errc::UnsupportedOnContinuousScale: return "UnsupportedOnContinuousScale";
    case Errc::DensePointWithoutAnalyticDerivative: return "DensePointWithoutAnalyticDerivative";
    case Errc::EmptyDerivativeDomain: return "EmptyDerivativeDomain";
    case Errc::DomainExhausted: return "DomainExhausted";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::LimitUnavailable: return "LimitUnavailable";
    case Errc::SignConditionViolated: return "SignConditionViolated";
    case Errc::DegenerateInterval: return "DegenerateInterval";
    case Errc::ScaleTooSmall: return "ScaleTooSmall";
    case Errc::NegativeN: return "NegativeN";
    case Errc::MissingDerivativeAtZero: return "MissingDerivativeAtZero";
    case Errc::OutsideRadiusOfConvergence: return "OutsideRadiusOfConvergence";
    case Errc::TailNotCertified: return "TailNotCertified";
    case Errc::PrecisionUnsupported: return "PrecisionUnsupported";
    case Errc::InvalidScaleSpec: return "InvalidScaleSpec";
    case Errc::CsvFormat: return "CsvFormat";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

} // namespace tsc
