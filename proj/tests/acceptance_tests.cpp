// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include "tsc/cli.hpp"
#include "tsc/lhopital.hpp"
#include "tsc/qbounds.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace tsc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct BinaryResult {
    int exitCode = -1;
    std::string out;
};

BinaryResult run_binary(const std::string& args) {
    const char* bin = std::getenv("TSCALC_BIN");
    if (!bin) return {};
    const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {};
    BinaryResult r;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool criterion1_delta_suite(std::string& detail) {
    const auto start = Clock::now();
    SuiteConfig cfg;
    cfg.trials = 1000;
    cfg.seed = 20240801;
    cfg.tol = 1e-10L;
    const SuiteReport report = run_property_suite(cfg);
    const double elapsed = seconds_since(start);
    std::ostringstream info;
    info << "violations=" << report.violations << " premise_failures=" << report.premiseFailures
         << " vacuous=" << report.vacuous << " satisfied=" << report.satisfied << " elapsed="
         << elapsed << "s";
    detail = info.str();
    return report.violations == 0 && report.premiseFailures == 0 &&
           report.satisfied + report.vacuous == cfg.trials && elapsed <= 10.0;
}

bool criterion2_nabla_suite(std::string& detail) {
    SuiteConfig cfg;
    cfg.trials = 500;
    cfg.seed = 20240802;
    cfg.tol = 1e-10L;
    cfg.nabla = true;
    const SuiteReport report = run_property_suite(cfg);
    std::ostringstream info;
    info << "violations=" << report.violations
         << " duality_mismatches=" << report.dualityMismatches << " vacuous=" << report.vacuous;
    detail = info.str();
    return report.violations == 0 && report.dualityMismatches == 0 &&
           report.satisfied + report.vacuous == cfg.trials;
}

bool criterion3_continuous_limit(std::string& detail) {
    int passes = 0;
    for (Real h : {1e-1L, 1e-2L, 1e-3L}) {
        const long count = static_cast<long>(std::llroundl(1.0L / h)) + 1;
        const TimeScale ts = TimeScale::lattice(0.0L, h, count);
        const TsInterval whole = TsInterval::closed(ts.min_point(), ts.max_point());
        const GridFunction f =
            GridFunction::sample(ts, whole, [](Real x) { return x * x * x + x; });
        const GridFunction g = GridFunction::sample(ts, whole, [](Real x) { return x; });
        const RuleReport report =
            verify_delta_rule(f, g, EndSide::Left, EndpointValue::supplied(0.0L),
                              EndpointValue::supplied(0.0L), true, 1e-10L);
        if (report.outcome == RuleOutcome::Satisfied &&
            report.conclusion.kind == MonoKind::StrictlyIncreasing)
            ++passes;
    }
    detail = "strictly-increasing verdicts at h=1e-1,1e-2,1e-3: " + std::to_string(passes) + "/3";
    return passes == 3;
}

bool criterion4_mvt(std::string& detail) {
    long failures = 0;
    for (long trial = 0; trial < 200; ++trial) {
        auto rng = SplitMix64::split(20240804, static_cast<std::uint64_t>(trial));
        const long count = rng.uniform_int(4, 12);
        std::vector<Real> raw;
        Real t = rng.uniform(-4.0L, 4.0L);
        for (long i = 0; i < count; ++i) {
            raw.push_back(t);
            t += rng.uniform(0.05L, 1.0L);
        }
        const TimeScale ts = TimeScale::finite(std::move(raw));
        const TsInterval derivIv = TsInterval::closed(ts.min_point(), ts.rho(ts.max_point()));
        const auto derivPts = ts.points_in(derivIv);
        std::vector<Real> gRate, fRate;
        for (std::size_t i = 0; i < derivPts.size(); ++i) {
            gRate.push_back(rng.uniform(0.05L, 2.0L)); // g^delta > 0
            fRate.push_back(rng.uniform(-3.0L, 3.0L) * gRate.back());
        }
        const GridFunction G = delta_integrate(GridFunction::table(ts, derivIv, gRate),
                                               ts.min_point(), rng.uniform(-2.0L, 2.0L));
        const GridFunction F = delta_integrate(GridFunction::table(ts, derivIv, fRate),
                                               ts.min_point(), rng.uniform(-2.0L, 2.0L));

        const ScalePoint a = ts.min_point();
        const ScalePoint x = ts.max_point();
        const MvtWitnesses w = cauchy_mvt_witnesses(F, G, a, x);

        // independent exhaustive scan straight over the raw values
        Real lo = 0, hi = 0;
        bool first = true;
        const auto scanPts = ts.points_in(TsInterval::closed_open(a, x));
        for (const auto& c : scanPts) {
            const ScalePoint s = ts.sigma(c);
            const Real mu = s.value() - c.value();
            const Real ratio = ((F(s) - F(c)) / mu) / ((G(s) - G(c)) / mu);
            if (first || ratio < lo) lo = ratio;
            if (first || ratio > hi) hi = ratio;
            first = false;
        }
        const Real middle = (F(x) - F(a)) / (G(x) - G(a));

        const bool sandwich = w.lowerRatio <= w.middleRatio && w.middleRatio <= w.upperRatio;
        const bool matchesOracle =
            w.lowerRatio == lo && w.upperRatio == hi && w.middleRatio == middle;
        const bool oracleSandwich = lo <= middle && middle <= hi;
        if (!(sandwich && matchesOracle && oracleSandwich)) ++failures;
    }
    detail = "failures=" + std::to_string(failures) + "/200";
    return failures == 0;
}

bool criterion5_q_identities(std::string& detail) {
    std::ostringstream info;
    bool ok = true;

    // D_q (x-a)^n_q = [n] (x-a)^{n-1}_q, 20-point grid, n <= 6
    Real worstPoly = 0;
    for (Real q : {0.3L, 0.5L, 0.9L}) {
        const QContext ctx(q);
        const Real a = 0.5L;
        for (int n = 1; n <= 6; ++n) {
            for (int i = 0; i < 20; ++i) {
                const Real x = 1.0L + 2.0L * static_cast<Real>(i) / 19.0L;
                const Real lhs =
                    q_derivative(ctx, [&](Real y) { return q_poly(ctx, y, a, n); }, x);
                const Real rhs =
                    q_number(ctx, static_cast<Real>(n)) * q_poly(ctx, x, a, n - 1);
                const Real rel = std::fabs(lhs - rhs) / std::fabs(rhs);
                worstPoly = std::max(worstPoly, rel);
            }
        }
    }
    ok = ok && worstPoly <= 1e-12L;
    info << "poly_rel=" << static_cast<double>(worstPoly);

    // D_q series = series within 1e-9 on lattice points inside the radius
    Real worstSeries = 0;
    for (Real q : {0.3L, 0.5L, 0.9L}) {
        const QContext ctx(q);
        auto series = [&](Real y) { return q_exponential(ctx, y).value; };
        for (long k = 8; k >= -30; --k) {
            const Real x = power_int(q, k);
            if (x >= 0.85L * ctx.radius()) break;
            const Real lhs = q_derivative(ctx, series, x);
            const Real rel = std::fabs(lhs - series(x)) / series(x);
            worstSeries = std::max(worstSeries, rel);
        }
    }
    ok = ok && worstSeries <= 1e-9L;
    info << " series_rel=" << static_cast<double>(worstSeries);

    // exact unit value at zero
    const QContext half(0.5L);
    ok = ok && q_exponential(half, 0.0L).value == 1.0L;

    // backward lattice quotient equals the q-difference operator
    Real worstNabla = 0;
    for (Real q : {0.3L, 0.5L, 0.9L}) {
        const QContext ctx(q);
        const TimeScale ts = TimeScale::qscale(q, 0, 12);
        const TsInterval whole = TsInterval::closed(ts.min_point(), ts.max_point());
        auto series = [&](Real y) { return q_exponential(ctx, y).value; };
        const GridFunction f = GridFunction::sample(ts, whole, series);
        const GridFunction nd = f.nabla_derivative();
        for (const auto& p : nd.domain_points()) {
            const Real direct = q_derivative(ctx, series, p.value());
            const Real rel = std::fabs(nd(p) - direct) / std::fabs(direct);
            worstNabla = std::max(worstNabla, rel);
        }
    }
    ok = ok && worstNabla <= 1e-14L;
    info << " nabla_rel=" << static_cast<double>(worstNabla);

    detail = info.str();
    return ok;
}

bool criterion6_bounds(std::string& detail) {
    const auto start = Clock::now();
    bool ok = true;
    Real worstResidual = 0;
    for (Real q : {0.3L, 0.5L, 0.9L}) {
        for (int n : {1, 2, 3, 4}) {
            const QContext ctx(q, 18, 1e-14L);
            const BoundProblem problem(ctx, 4, 0, n);
            const BoundReport report = sandwich_report(problem, 1e-10L);
            ok = ok && report.allPassed;
            worstResidual = std::max(
                {worstResidual, report.endpointEqualityLower, report.endpointEqualityUpper});
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream info;
    info << "worst_endpoint_residual=" << static_cast<double>(worstResidual)
         << " elapsed=" << elapsed << "s";
    detail = info.str();
    return ok && worstResidual <= 1e-10L && elapsed <= 5.0;
}

bool criterion7_chain(std::string& detail) {
    bool ok = true;
    std::ostringstream info;
    for (Real q : {0.3L, 0.5L, 0.9L}) {
        for (int n : {1, 2, 3, 4}) {
            const QContext ctx(q, 18, 1e-14L);
            const BoundProblem problem(ctx, 4, 0, n);
            const ChainReport chain = verify_derivative_chain(problem, 1e-10L);
            if (!(chain.vanishOk && chain.topConstantExact && chain.ratiosIncreasing &&
                  chain.allPassed)) {
                ok = false;
                info << " fail(q=" << static_cast<double>(q) << ",n=" << n << ")";
            }
        }
    }
    detail = "grid {0.3,0.5,0.9} x {1,2,3,4}" + info.str();
    return ok;
}

bool criterion8_exactness(std::string& detail) {
    bool ok = true;

    // zero-error square rule on binary-exact lattices
    std::vector<TimeScale> scales = {
        TimeScale::lattice(-10.0L, 1.0L, 40),
        TimeScale::lattice(0.0L, 2.0L, 25),
        TimeScale::qscale(0.5L, -8, 20),
        TimeScale::qscale(0.25L, -4, 12),
        TimeScale::qscale(0.75L, 0, 15),
    };
    for (const auto& ts : scales) {
        const TsInterval whole = TsInterval::closed(ts.min_point(), ts.max_point());
        const GridFunction f = GridFunction::sample(ts, whole, [](Real t) { return t * t; });
        const GridFunction d = f.delta_derivative();
        for (const auto& p : d.domain_points())
            if (d(p) != p.value() + ts.sigma(p).value()) ok = false;
    }

    // jump round-trips on 10^4 random q-scale points
    const TimeScale qs = TimeScale::qscale(0.37L, -50, 80);
    SplitMix64 rng(20240808);
    long bad = 0;
    for (int i = 0; i < 10000; ++i) {
        const long k = rng.uniform_int(-50, 80);
        const ScalePoint t = qs.q_point(k);
        if (k > -50 && !(qs.rho(qs.sigma(t)) == t)) ++bad;
        if (k < 80 && !(qs.sigma(qs.rho(t)) == t)) ++bad;
        if (qs.q_point(k).value() != t.value()) ++bad;
    }
    detail = "square-rule exact on 5 scales, round-trip mismatches=" + std::to_string(bad);
    return ok && bad == 0;
}

bool criterion9_cli(std::string& detail) {
    const BinaryResult first = run_binary("verify lhopital --trials 100 --seed 7 --format json");
    const BinaryResult second = run_binary("verify lhopital --trials 100 --seed 7 --format json");
    const bool identical =
        first.exitCode == 0 && second.exitCode == 0 && !first.out.empty() &&
        first.out == second.out;

    const std::string csvPath = "/tmp/tscalc_acceptance_tampered.csv";
    {
        std::ofstream csv(csvPath);
        csv << "t,f,g\n0,0,0\n1,1,1\n2,4,0.5\n4,16,4\n";
    }
    const BinaryResult tampered = run_binary("mvt --csv " + csvPath + " --x 4");
    const BinaryResult diverging = run_binary("qexp --q 0.5 --x 2");
    const BinaryResult healthy = run_binary("bounds --q 0.5 --a-exp 4 --b-exp 0 --n 2");

    std::ostringstream info;
    info << "identical=" << (identical ? "yes" : "no") << " tampered_exit=" << tampered.exitCode
         << " diverging_exit=" << diverging.exitCode << " bounds_exit=" << healthy.exitCode;
    detail = info.str();
    return identical && tampered.exitCode == 2 && diverging.exitCode == 2 &&
           healthy.exitCode == 0;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Criterion> criteria = {
        {"criterion-1 forward-rule suite (1000 trials, tol 1e-10, <= 10 s)",
         criterion1_delta_suite},
        {"criterion-2 backward-rule suite (500 trials, direct vs reflected)",
         criterion2_nabla_suite},
        {"criterion-3 continuous-limit sanity (h = 1e-1, 1e-2, 1e-3)",
         criterion3_continuous_limit},
        {"criterion-4 mean value witnesses (200 pairs, exhaustive-scan oracle)", criterion4_mvt},
        {"criterion-5 q-calculus identities", criterion5_q_identities},
        {"criterion-6 sandwich bounds ({0.3,0.5,0.9} x {1..4}, <= 5 s)", criterion6_bounds},
        {"criterion-7 derivative ladder", criterion7_chain},
        {"criterion-8 exact jump arithmetic", criterion8_exactness},
        {"criterion-9 CLI determinism and exit codes", criterion9_cli},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!ok) ++failures;
        std::cout << (ok ? "PASS " : "FAIL ") << criterion.name
                  << (detail.empty() ? "" : "  [" + detail + "]") << "\n";
    }
    return failures == 0 ? 0 : 1;
}
