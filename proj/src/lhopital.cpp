#include "tsc/lhopital.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tsc {

namespace {

void require_shared_layout(const GridFunction& f, const GridFunction& g) {
    if (!f.scale().equivalent(g.scale()))
        raise(Errc::InvalidArgument, "functions must share one scale");
    const auto& df = f.domain();
    const auto& dg = g.domain();
    if (df.lower().value() != dg.lower().value() || df.upper().value() != dg.upper().value() ||
        df.lower_open() != dg.lower_open() || df.upper_open() != dg.upper_open())
        raise(Errc::InvalidArgument, "functions must share one domain");
}

/// Rule window and derivative samples for either derivative direction.
/// A dense minimum (the q-scale accumulation point) is skipped before
/// forward differencing; backward quotients at positive points are fine.
PremiseReport premises_impl(const GridFunction& f, const GridFunction& g, Real tol,
                            DerivKind kind) {
    require_shared_layout(f, g);
    if (!f.scale().discrete())
        raise(Errc::UnsupportedOnContinuousScale, "premise check needs a discrete scale");
    const auto& pts = f.domain_points();
    if (pts.size() < 3) raise(Errc::ScaleTooSmall, "premise check needs at least 3 points");

    GridFunction fd = f;
    GridFunction gd = g;
    if (kind == DerivKind::Delta && pts.front().rep() == ScalePoint::Rep::Zero) {
        const TsInterval positive = TsInterval::closed(pts[1], pts.back());
        fd = f.restricted(positive);
        gd = g.restricted(positive);
    }
    fd = fd.derivative(kind);
    gd = gd.derivative(kind);

    const auto& derivPts = fd.domain_points();
    PremiseReport report{DerivSign::Mixed,
                         MonotonicityVerdict{},
                         false,
                         TsInterval::open(derivPts.front(), derivPts.back()),
                         {}};

    bool allPos = true, allNeg = true;
    std::vector<ScalePoint> windowPts;
    std::vector<Real> ratios;
    for (std::size_t i = 1; i + 1 < derivPts.size(); ++i) {
        const Real gv = gd(derivPts[i]);
        if (!(gv > tol)) allPos = false;
        if (!(gv < -tol)) allNeg = false;
        if (gv != 0.0L) {
            windowPts.push_back(derivPts[i]);
            ratios.push_back(fd(derivPts[i]) / gv);
        }
    }
    const bool haveWindow = derivPts.size() > 2;
    if (haveWindow && allPos)
        report.gDerivSign = DerivSign::AllPositive;
    else if (haveWindow && allNeg)
        report.gDerivSign = DerivSign::AllNegative;
    else
        report.gDerivSign = DerivSign::Mixed;

    report.ratioVerdict = classify_value_sequence(windowPts, ratios, tol);
    report.ratioSamples.reserve(windowPts.size());
    for (std::size_t i = 0; i < windowPts.size(); ++i)
        report.ratioSamples.emplace_back(windowPts[i], ratios[i]);
    return report;
}

/// Direction-specific acceptance: a constant-within-tol transform counts as
/// monotone in either direction, which the collapsed verdict kind cannot say.
bool samples_match_direction(const std::vector<std::pair<ScalePoint, Real>>& samples,
                             bool increasing, bool strict, Real tol) {
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const Real d = samples[i + 1].second - samples[i].second;
        if (increasing) {
            if (strict ? !(d > tol) : d < -tol) return false;
        } else {
            if (strict ? !(d < -tol) : d > tol) return false;
        }
    }
    return true;
}

RuleReport verify_rule_impl(const GridFunction& f, const GridFunction& g, EndSide end,
                            const EndpointValue& fEnd, const EndpointValue& gEnd, bool strict,
                            Real tol, DerivKind kind) {
    RuleReport report;
    report.premises = premises_impl(f, g, tol, kind);

    if (report.premises.ratioVerdict.kind == MonoKind::Vacuous) {
        report.conclusion = MonotonicityVerdict{MonoKind::Vacuous, std::nullopt, tol};
        report.outcome = RuleOutcome::VacuousConclusion;
        return report;
    }
    if (!report.premises.pass(strict)) {
        report.conclusion = MonotonicityVerdict{MonoKind::Vacuous, std::nullopt, tol};
        report.outcome = RuleOutcome::PremisesFailed;
        return report;
    }

    const GridFunction transform = endpoint_ratio(f, g, end, fEnd, gEnd);
    report.premises.endpointOk = true;
    report.conclusion = transform.classify_monotonicity(report.premises.window, tol);
    for (const auto& p : f.scale().points_in(report.premises.window))
        report.ratioTransformSamples.emplace_back(p, transform(p));

    if (report.conclusion.kind == MonoKind::Vacuous) {
        report.outcome = RuleOutcome::VacuousConclusion;
        return report;
    }
    const bool wantIncreasing = report.premises.ratioVerdict.is_increasing();
    const bool ok =
        samples_match_direction(report.ratioTransformSamples, wantIncreasing, strict, tol);
    report.theoremSatisfied = ok;
    report.outcome = ok ? RuleOutcome::Satisfied : RuleOutcome::Violated;
    return report;
}

/// Strictly increasing or decreasing value run over the derivative points;
/// non-strict profiles mix in plateaus. The rule window excludes the first
/// and last derivative point, so inside the window we pin one plateau (the
/// verdict must not be strict) and one genuine step (a constant window would
/// leave the direction ambiguous) whenever it is wide enough for both.
std::vector<Real> monotone_ratio_sequence(SplitMix64& rng, std::size_t count,
                                          const PairProfile& profile) {
    std::vector<Real> r(count);
    if (count == 0) return r;
    r[0] = rng.uniform(-3.0L, 3.0L);
    std::vector<bool> plateau(count > 1 ? count - 1 : 0, false);
    if (!profile.strict && count > 1) {
        for (std::size_t i = 0; i + 1 < count; ++i) plateau[i] = rng.bernoulli(0.35);
        const long windowLo = 1;
        const long windowHi = static_cast<long>(count) - 3; // step i joins r[i], r[i+1]
        if (windowHi > windowLo) {
            const long flat = rng.uniform_int(windowLo, windowHi);
            long step = rng.uniform_int(windowLo, windowHi - 1);
            if (step >= flat) ++step;
            plateau[static_cast<std::size_t>(flat)] = true;
            plateau[static_cast<std::size_t>(step)] = false;
        } else if (windowHi == windowLo) {
            plateau[static_cast<std::size_t>(windowLo)] = false;
        }
    }
    const Real dir = profile.increasing ? 1.0L : -1.0L;
    for (std::size_t i = 1; i < count; ++i) {
        const Real step = plateau[i - 1] ? 0.0L : rng.uniform(0.05L, 0.5L);
        r[i] = r[i - 1] + dir * step;
    }
    return r;
}

EndSide flip(EndSide end) { return end == EndSide::Left ? EndSide::Right : EndSide::Left; }

} // namespace

const char* deriv_sign_name(DerivSign sign) {
    switch (sign) {
    case DerivSign::AllPositive: return "all-positive";
    case DerivSign::AllNegative: return "all-negative";
    case DerivSign::Mixed: return "mixed";
    }
    return "?";
}

const char* rule_outcome_name(RuleOutcome outcome) {
    switch (outcome) {
    case RuleOutcome::Satisfied: return "satisfied";
    case RuleOutcome::Violated: return "violated";
    case RuleOutcome::PremisesFailed: return "premises-failed";
    case RuleOutcome::VacuousConclusion: return "vacuous";
    }
    return "?";
}

Real resolve_endpoint(const GridFunction& f, EndSide end, const EndpointValue& value) {
    if (value.is_supplied()) return value.value();
    const TimeScale& ts = f.scale();
    if (!ts.discrete()) {
        const Real lo = f.domain().lower().value();
        const Real hi = f.domain().upper().value();
        Real offset = hi - lo;
        Real prev = 0;
        bool have = false;
        for (int j = 1; j <= value.max_steps(); ++j) {
            offset *= 0.5L;
            const Real x = end == EndSide::Left ? lo + offset : hi - offset;
            const Real est = f.eval_value(x);
            if (have && std::fabs(est - prev) < value.tail_tolerance()) return est;
            prev = est;
            have = true;
        }
        raise(Errc::LimitUnavailable, "endpoint estimates did not settle within the step cap");
    }
    const auto& pts = f.domain_points();
    if (ts.kind() == ScaleKind::QScale && end == EndSide::Left && pts.size() >= 3 &&
        pts.front().rep() == ScalePoint::Rep::Zero) {
        // walk down the lattice toward the accumulation point
        int steps = 0;
        for (std::size_t i = pts.size() - 1; i >= 2; --i) {
            const Real above = f(pts[i]);
            const Real below = f(pts[i - 1]);
            if (std::fabs(above - below) < value.tail_tolerance()) return below;
            if (++steps >= value.max_steps()) break;
        }
        raise(Errc::LimitUnavailable, "lattice estimates did not settle before the cap");
    }
    raise(Errc::LimitUnavailable, "endpoint is isolated; supply its value explicitly");
}

GridFunction endpoint_ratio(const GridFunction& f, const GridFunction& g, EndSide end,
                            const EndpointValue& fEnd, const EndpointValue& gEnd) {
    require_shared_layout(f, g);
    const Real fv = resolve_endpoint(f, end, fEnd);
    const Real gv = resolve_endpoint(g, end, gEnd);

    if (!f.scale().discrete()) {
        const TsInterval interior = TsInterval::open(f.domain().lower(), f.domain().upper());
        auto ratio = [f, g, fv, gv](Real x) {
            const Real den = g.eval_value(x) - gv;
            if (den == 0.0L)
                raise(Errc::ZeroDenominator,
                      "g(x) equals the endpoint value at x = " + format_real(x, 17));
            return (f.eval_value(x) - fv) / den;
        };
        return GridFunction::analytic(f.scale(), interior, ratio);
    }

    const auto& pts = f.domain_points();
    if (pts.size() < 2) raise(Errc::DegenerateInterval, "domain has no interior");
    const TsInterval interior = TsInterval::open(pts.front(), pts.back());
    const auto inner = f.scale().points_in(interior);
    std::vector<Real> values;
    values.reserve(inner.size());
    for (const auto& p : inner) {
        const Real den = g(p) - gv;
        if (den == 0.0L)
            raise(Errc::ZeroDenominator,
                  "g(x) equals the endpoint value at x = " + format_real(p.value(), 17));
        values.push_back((f(p) - fv) / den);
    }
    return GridFunction::table(f.scale(), interior, std::move(values));
}

PremiseReport check_delta_premises(const GridFunction& f, const GridFunction& g, Real tol) {
    return premises_impl(f, g, tol, DerivKind::Delta);
}

PremiseReport check_nabla_premises(const GridFunction& f, const GridFunction& g, Real tol) {
    return premises_impl(f, g, tol, DerivKind::Nabla);
}

RuleReport verify_delta_rule(const GridFunction& f, const GridFunction& g, EndSide end,
                             const EndpointValue& fEnd, const EndpointValue& gEnd, bool strict,
                             Real tol) {
    return verify_rule_impl(f, g, end, fEnd, gEnd, strict, tol, DerivKind::Delta);
}

RuleReport verify_nabla_rule(const GridFunction& f, const GridFunction& g, EndSide end,
                             const EndpointValue& fEnd, const EndpointValue& gEnd, bool strict,
                             Real tol) {
    return verify_rule_impl(f, g, end, fEnd, gEnd, strict, tol, DerivKind::Nabla);
}

RuleReport verify_corollary(const GridFunction& f, const GridFunction& g, Corollary which,
                            bool strict, Real tol, EndSide zeroEnd) {
    require_shared_layout(f, g);
    if (!f.scale().discrete())
        raise(Errc::UnsupportedOnContinuousScale, "corollary check needs a discrete scale");
    const auto& pts = f.domain_points();
    if (pts.empty()) raise(Errc::DegenerateInterval, "empty domain");
    switch (which) {
    case Corollary::C1:
        return verify_delta_rule(f, g, EndSide::Left, EndpointValue::supplied(f(pts.front())),
                                 EndpointValue::supplied(g(pts.front())), strict, tol);
    case Corollary::C2:
        return verify_delta_rule(f, g, EndSide::Right, EndpointValue::supplied(f(pts.back())),
                                 EndpointValue::supplied(g(pts.back())), strict, tol);
    case Corollary::C3:
        return verify_delta_rule(f, g, zeroEnd, EndpointValue::supplied(0.0L),
                                 EndpointValue::supplied(0.0L), strict, tol);
    }
    raise(Errc::InvalidArgument, "unknown corollary");
}

std::pair<GridFunction, GridFunction> generate_test_pair(const TimeScale& ts, SplitMix64& rng,
                                                         const PairProfile& profile) {
    if (!ts.discrete())
        raise(Errc::UnsupportedOnContinuousScale, "pair generation needs a discrete scale");
    if (ts.size() < 4) raise(Errc::ScaleTooSmall, "pair generation needs at least 4 points");

    const ScalePoint a = ts.min_point();
    const TsInterval derivIv = TsInterval::closed(a, ts.rho(ts.max_point()));
    const auto derivPts = ts.points_in(derivIv);
    const std::size_t count = derivPts.size();

    const auto ratios = monotone_ratio_sequence(rng, count, profile);
    std::vector<Real> gRate(count), fRate(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Real magnitude = rng.uniform(0.1L, 2.0L);
        gRate[i] = profile.gPositive ? magnitude : -magnitude;
        fRate[i] = ratios[i] * gRate[i];
    }
    const Real g0 = rng.uniform(-5.0L, 5.0L);
    const Real f0 = rng.uniform(-5.0L, 5.0L);
    auto g = delta_integrate(GridFunction::table(ts, derivIv, std::move(gRate)), a, g0);
    auto f = delta_integrate(GridFunction::table(ts, derivIv, std::move(fRate)), a, f0);
    return {std::move(f), std::move(g)};
}

std::pair<GridFunction, GridFunction> generate_nabla_test_pair(const TimeScale& ts,
                                                               SplitMix64& rng,
                                                               const PairProfile& profile) {
    if (!ts.discrete())
        raise(Errc::UnsupportedOnContinuousScale, "pair generation needs a discrete scale");
    if (ts.size() < 4) raise(Errc::ScaleTooSmall, "pair generation needs at least 4 points");

    const auto pts = ts.all_points();
    const std::size_t count = pts.size() - 1; // backward rates at pts[1..]

    const auto ratios = monotone_ratio_sequence(rng, count, profile);
    std::vector<Real> gRate(count), fRate(count);
    for (std::size_t i = 0; i < count; ++i) {
        const Real magnitude = rng.uniform(0.1L, 2.0L);
        gRate[i] = profile.gPositive ? magnitude : -magnitude;
        fRate[i] = ratios[i] * gRate[i];
    }
    const Real g0 = rng.uniform(-5.0L, 5.0L);
    const Real f0 = rng.uniform(-5.0L, 5.0L);

    std::vector<Real> gv(pts.size()), fv(pts.size());
    gv[0] = g0;
    fv[0] = f0;
    for (std::size_t j = 1; j < pts.size(); ++j) {
        const Real gap = pts[j].value() - pts[j - 1].value();
        gv[j] = gv[j - 1] + gap * gRate[j - 1];
        fv[j] = fv[j - 1] + gap * fRate[j - 1];
    }
    const TsInterval whole = TsInterval::closed(pts.front(), pts.back());
    return {GridFunction::table(ts, whole, std::move(fv)),
            GridFunction::table(ts, whole, std::move(gv))};
}

std::vector<ScaleFamilySpec> SuiteConfig::default_families() {
    return {
        {ScaleKind::Finite, 0.5L, 4, 50},  {ScaleKind::Lattice, 0.5L, 4, 50},
        {ScaleKind::QScale, 0.3L, 4, 12},  {ScaleKind::QScale, 0.5L, 4, 12},
        {ScaleKind::QScale, 0.9L, 4, 12},
    };
}

namespace {

TimeScale make_suite_scale(SplitMix64& rng, const ScaleFamilySpec& family) {
    switch (family.kind) {
    case ScaleKind::Finite: {
        const long count = rng.uniform_int(family.minPoints, family.maxPoints);
        std::vector<Real> pts;
        pts.reserve(static_cast<std::size_t>(count));
        Real t = rng.uniform(-5.0L, 5.0L);
        for (long i = 0; i < count; ++i) {
            pts.push_back(t);
            t += rng.uniform(0.05L, 1.0L);
        }
        return TimeScale::finite(std::move(pts));
    }
    case ScaleKind::Lattice: {
        const long count = rng.uniform_int(family.minPoints, family.maxPoints);
        return TimeScale::lattice(rng.uniform(-5.0L, 5.0L), rng.uniform(0.02L, 1.0L), count);
    }
    case ScaleKind::QScale: {
        // small exponent spans keep the largest-to-smallest gap ratio, and
        // with it the conclusion margins, well above the tolerance
        const long cap = std::min<long>(family.maxPoints, 12);
        const long count = rng.uniform_int(std::min(family.minPoints, cap), cap);
        const long kMin = rng.uniform_int(-6, 0);
        return TimeScale::qscale(family.q, kMin, kMin + count - 1, false);
    }
    case ScaleKind::Continuous:
        break;
    }
    raise(Errc::InvalidArgument, "suite scales must be discrete");
}

PairProfile profile_for_combo(long combo, bool nonStrictOnly) {
    PairProfile profile;
    profile.strict = nonStrictOnly ? false : (combo & 1) == 0;
    profile.increasing = (combo & 2) == 0;
    profile.gPositive = (combo & 4) == 0;
    return profile;
}

TrialRecord run_delta_trial(const SuiteConfig& cfg, const std::vector<ScaleFamilySpec>& families,
                            long index) {
    auto rng = SplitMix64::split(cfg.seed, static_cast<std::uint64_t>(index));
    const long combo = index % 16;
    const PairProfile profile = profile_for_combo(combo, cfg.nonStrictOnly);
    const EndSide end = (combo & 8) ? EndSide::Right : EndSide::Left;
    const auto& family = families[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<long>(families.size()) - 1))];
    const TimeScale ts = cfg.fixedScale ? *cfg.fixedScale : make_suite_scale(rng, family);

    auto [f, g] = generate_test_pair(ts, rng, profile);
    const ScalePoint a = f.domain_points().front();
    const ScalePoint b = f.domain_points().back();
    const Real fEnd = end == EndSide::Left ? f(a) : f(b);
    const Real gEnd = end == EndSide::Left ? g(a) : g(b);
    const RuleReport report =
        verify_delta_rule(f, g, end, EndpointValue::supplied(fEnd), EndpointValue::supplied(gEnd),
                          profile.strict, cfg.tol);

    TrialRecord rec;
    rec.index = index;
    rec.scaleText = ts.describe();
    rec.profile = profile;
    rec.end = end;
    rec.outcome = report.outcome;
    if (report.conclusion.witness) rec.witness = report.conclusion.witness;

    // representation-level slack only: constant-ratio draws can tie all
    // three quantities, where the weighted mean may land an ulp outside
    const auto mvt = cauchy_mvt_witnesses(f, g, a, b);
    const Real slack =
        16.0L * std::numeric_limits<Real>::epsilon() *
        std::max({1.0L, std::fabs(mvt.lowerRatio), std::fabs(mvt.upperRatio)});
    rec.mvtHolds = mvt.lowerRatio <= mvt.middleRatio + slack &&
                   mvt.middleRatio <= mvt.upperRatio + slack;
    return rec;
}

TrialRecord run_nabla_trial(const SuiteConfig& cfg, const std::vector<ScaleFamilySpec>& families,
                            long index) {
    auto rng = SplitMix64::split(cfg.seed, static_cast<std::uint64_t>(index));
    const long combo = index % 16;
    const PairProfile profile = profile_for_combo(combo, cfg.nonStrictOnly);
    const EndSide end = (combo & 8) ? EndSide::Right : EndSide::Left;
    const auto& family = families[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<long>(families.size()) - 1))];
    const TimeScale ts = cfg.fixedScale ? *cfg.fixedScale : make_suite_scale(rng, family);

    auto [f, g] = generate_nabla_test_pair(ts, rng, profile);
    const ScalePoint a = f.domain_points().front();
    const ScalePoint b = f.domain_points().back();
    const Real fEnd = end == EndSide::Left ? f(a) : f(b);
    const Real gEnd = end == EndSide::Left ? g(a) : g(b);

    const RuleReport direct =
        verify_nabla_rule(f, g, end, EndpointValue::supplied(fEnd), EndpointValue::supplied(gEnd),
                          profile.strict, cfg.tol);

    // second route: reflect everything and run the forward rule
    const GridFunction fDual = f.dual_function();
    const GridFunction gDual = g.dual_function();
    const RuleReport reflected =
        verify_delta_rule(fDual, gDual, flip(end), EndpointValue::supplied(fEnd),
                          EndpointValue::supplied(gEnd), profile.strict, cfg.tol);

    TrialRecord rec;
    rec.index = index;
    rec.scaleText = ts.describe();
    rec.profile = profile;
    rec.end = end;
    rec.outcome = direct.outcome;
    if (direct.conclusion.witness) rec.witness = direct.conclusion.witness;

    rec.dualAgrees = direct.outcome == reflected.outcome &&
                     direct.ratioTransformSamples.size() == reflected.ratioTransformSamples.size();
    if (rec.dualAgrees) {
        const auto n = direct.ratioTransformSamples.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& [p, h] = direct.ratioTransformSamples[i];
            const auto& [pd, hd] = reflected.ratioTransformSamples[n - 1 - i];
            if (pd.value() != -p.value()) {
                rec.dualAgrees = false;
                break;
            }
            rec.maxDualGap = std::max(rec.maxDualGap, std::fabs(h - hd));
        }
        if (rec.maxDualGap > 1e-12L) rec.dualAgrees = false;
    }
    return rec;
}

} // namespace

SuiteReport run_property_suite(const SuiteConfig& cfg) {
    const auto families = cfg.families.empty() ? SuiteConfig::default_families() : cfg.families;
    SuiteReport report;
    report.trials = cfg.trials;
    report.seed = cfg.seed;
    report.tol = cfg.tol;
    report.nabla = cfg.nabla;

    for (long index = 0; index < cfg.trials; ++index) {
        TrialRecord rec = cfg.nabla ? run_nabla_trial(cfg, families, index)
                                    : run_delta_trial(cfg, families, index);
        switch (rec.outcome) {
        case RuleOutcome::Satisfied: ++report.satisfied; break;
        case RuleOutcome::Violated: ++report.violations; break;
        case RuleOutcome::PremisesFailed: ++report.premiseFailures; break;
        case RuleOutcome::VacuousConclusion: ++report.vacuous; break;
        }
        if (!rec.mvtHolds) ++report.mvtViolations;
        if (!rec.dualAgrees) ++report.dualityMismatches;
        if (cfg.verbose || rec.outcome == RuleOutcome::Violated || !rec.mvtHolds || !rec.dualAgrees)
            report.records.push_back(std::move(rec));
    }
    return report;
}

} // namespace tsc
