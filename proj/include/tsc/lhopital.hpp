#pragma once

#include "tsc/gridfn.hpp"
#include "tsc/rng.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace tsc {

enum class EndSide { Left, Right };

/// How an endpoint value f(a+) / f(b-) is obtained: supplied by the caller,
/// or estimated from samples marching into a dense accumulation point.
class EndpointValue {
public:
    static EndpointValue supplied(Real v) {
        EndpointValue e;
        e.supplied_ = true;
        e.value_ = v;
        return e;
    }
    /// Only legal toward an accumulation point of the scale (q-scale end at
    /// 0, continuous interval ends).
    static EndpointValue limit_from_samples(Real tailTolerance, int maxSteps = 64) {
        if (!(tailTolerance > 0.0L))
            raise(Errc::InvalidArgument, "tail tolerance must be positive");
        EndpointValue e;
        e.supplied_ = false;
        e.tailTol_ = tailTolerance;
        e.maxSteps_ = maxSteps;
        return e;
    }

    bool is_supplied() const { return supplied_; }
    Real value() const { return value_; }
    Real tail_tolerance() const { return tailTol_; }
    int max_steps() const { return maxSteps_; }

private:
    EndpointValue() = default;
    bool supplied_ = true;
    Real value_ = 0;
    Real tailTol_ = 0;
    int maxSteps_ = 64;
};

enum class DerivSign { AllPositive, AllNegative, Mixed };
const char* deriv_sign_name(DerivSign sign);

/// Premise audit for the monotone rule: sign of the denominator derivative
/// and monotonicity of the derivative ratio over the rule window.
struct PremiseReport {
    DerivSign gDerivSign = DerivSign::Mixed;
    MonotonicityVerdict ratioVerdict;
    bool endpointOk = false;
    TsInterval window;
    std::vector<std::pair<ScalePoint, Real>> ratioSamples;

    /// Premises of the rule in the given strictness mode.
    bool pass(bool strict) const {
        if (gDerivSign == DerivSign::Mixed) return false;
        if (!ratioVerdict.is_monotone()) return false;
        if (strict && !ratioVerdict.strict()) return false;
        return true;
    }
};

enum class RuleOutcome { Satisfied, Violated, PremisesFailed, VacuousConclusion };
const char* rule_outcome_name(RuleOutcome outcome);

struct RuleReport {
    PremiseReport premises;
    MonotonicityVerdict conclusion;
    bool theoremSatisfied = false;
    RuleOutcome outcome = RuleOutcome::PremisesFailed;
    std::vector<std::pair<ScalePoint, Real>> ratioTransformSamples;
};

/// Resolves an endpoint value, sampling toward dense accumulation points
/// when asked to.
Real resolve_endpoint(const GridFunction& f, EndSide end, const EndpointValue& value);

/// H(x) = (f(x) - fEnd)/(g(x) - gEnd) on the open interior of the shared
/// domain.
GridFunction endpoint_ratio(const GridFunction& f, const GridFunction& g, EndSide end,
                            const EndpointValue& fEnd, const EndpointValue& gEnd);

PremiseReport check_delta_premises(const GridFunction& f, const GridFunction& g, Real tol);
PremiseReport check_nabla_premises(const GridFunction& f, const GridFunction& g, Real tol);

RuleReport verify_delta_rule(const GridFunction& f, const GridFunction& g, EndSide end,
                             const EndpointValue& fEnd, const EndpointValue& gEnd, bool strict,
                             Real tol);
RuleReport verify_nabla_rule(const GridFunction& f, const GridFunction& g, EndSide end,
                             const EndpointValue& fEnd, const EndpointValue& gEnd, bool strict,
                             Real tol);

/// C1/C2 anchor the transform at the function's own endpoint values; C3
/// forces both endpoint values to zero, so the conclusion is about f/g.
enum class Corollary { C1, C2, C3 };
RuleReport verify_corollary(const GridFunction& f, const GridFunction& g, Corollary which,
                            bool strict, Real tol, EndSide zeroEnd = EndSide::Left);

/// Construction recipe for premise-guaranteed random pairs.
struct PairProfile {
    bool strict = true;
    bool increasing = true;
    bool gPositive = true;
};

/// Draws |g'| increments and a monotone ratio sequence, then accumulates
/// f' = ratio * g'. The forward-rule premises hold by construction.
std::pair<GridFunction, GridFunction> generate_test_pair(const TimeScale& ts, SplitMix64& rng,
                                                         const PairProfile& profile);
/// Mirror generator anchored on backward differences.
std::pair<GridFunction, GridFunction> generate_nabla_test_pair(const TimeScale& ts,
                                                               SplitMix64& rng,
                                                               const PairProfile& profile);

struct ScaleFamilySpec {
    ScaleKind kind = ScaleKind::Finite;
    Real q = 0.5L; // q-scale only
    long minPoints = 4;
    long maxPoints = 50;
};

struct SuiteConfig {
    long trials = 1000;
    std::uint64_t seed = 42;
    Real tol = 1e-10L;
    bool nabla = false;
    bool nonStrictOnly = false;
    bool verbose = false;
    std::vector<ScaleFamilySpec> families;  // empty = default mix
    std::optional<TimeScale> fixedScale;    // pin every trial to one scale

    static std::vector<ScaleFamilySpec> default_families();
};

struct TrialRecord {
    long index = 0;
    std::string scaleText;
    PairProfile profile;
    EndSide end = EndSide::Left;
    RuleOutcome outcome = RuleOutcome::PremisesFailed;
    bool mvtHolds = true;
    bool dualAgrees = true;
    Real maxDualGap = 0;
    std::optional<MonoWitness> witness;
};

struct SuiteReport {
    long trials = 0;
    std::uint64_t seed = 0;
    Real tol = 0;
    bool nabla = false;
    long satisfied = 0;
    long violations = 0;
    long premiseFailures = 0;
    long vacuous = 0;
    long mvtViolations = 0;
    long dualityMismatches = 0;
    std::vector<TrialRecord> records; // violations always; everything when verbose
};

/// Runs generate -> verify over random scales and cycled profiles. For the
/// backward rule each trial is verified twice: directly and through the
/// reflected scale, and the two must agree.
SuiteReport run_property_suite(const SuiteConfig& cfg);

} // namespace tsc
