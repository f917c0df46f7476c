#include "tsc/qbounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tsc {

namespace {

constexpr Real kRadiusGuard = 1e-9L;

/// sum_{k<n} e^a_q/[k]! (x-a)^k_q
Real taylor_sum(const BoundProblem& p, Real x) {
    const Real expA = q_exponential(p.ctx, p.a()).value;
    Real sum = 0;
    for (int k = 0; k < p.n; ++k)
        sum += expA / q_factorial(p.ctx, k) * q_poly(p.ctx, x, p.a(), k);
    return sum;
}

void require_in_range(const BoundProblem& p, Real x) {
    if (!(x >= p.left_endpoint() && x <= p.b()))
        raise(Errc::InvalidArgument, "x = " + format_real(x, 17) + " outside [" +
                                         format_real(p.left_endpoint(), 17) + ", " +
                                         format_real(p.b(), 17) + "]");
}

Real bound_at(const BoundProblem& p, Real x, Real anchor) {
    require_in_range(p, x);
    const Real coeff = q_poly(p.ctx, x, p.a(), p.n) / q_poly(p.ctx, anchor, p.a(), p.n);
    return taylor_sum(p, x) + coeff * taylor_gap(p, anchor);
}

/// The lower bound scales the anchor gap by (x-a)^n_q/(a/q - a)^n_q, which
/// grows quickly with n and with the depth of a in the lattice. When the
/// anchor gap itself sinks to the series/rounding noise floor, every verdict
/// downstream would be noise; refuse instead.
void require_resolvable_anchor(const BoundProblem& p) {
    const Real left = p.left_endpoint();
    const Real magnitude = q_exponential(p.ctx, left).value;
    const Real resolution = 2.0L * p.ctx.tailTol +
                            64.0L * std::numeric_limits<Real>::epsilon() *
                                std::max<Real>(1.0L, magnitude);
    if (std::fabs(taylor_gap(p, left)) < 64.0L * resolution)
        raise(Errc::PrecisionUnsupported,
              "anchor gap at a/q is below the working resolution for n = " +
                  std::to_string(p.n) + "; lower n, move a and b apart, or tighten tailTol");
}

/// [n-k+1][n-k+2]...[n], multiplied in ascending index order so that the
/// k = n case runs exactly the q_factorial loop.
Real chain_coefficient(const QContext& ctx, int n, int k) {
    std::vector<Real> qnums(static_cast<std::size_t>(n) + 1, 0.0L);
    for (int i = 1; i <= n; ++i)
        qnums[static_cast<std::size_t>(i)] = 1.0L + ctx.q * qnums[static_cast<std::size_t>(i - 1)];
    Real acc = 1.0L;
    for (int i = n - k + 1; i <= n; ++i) acc *= qnums[static_cast<std::size_t>(i)];
    return acc;
}

} // namespace

BoundProblem::BoundProblem(QContext context, long aExponent, long bExponent, int order)
    : ctx(context), aExp(aExponent), bExp(bExponent), n(order) {
    if (n < 1) raise(Errc::InvalidArgument, "order n must be >= 1");
    if (!(aExp > bExp))
        raise(Errc::InvalidArgument, "need a < b, i.e. aExp > bExp on a q-lattice");
    const Real bVal = power_int(ctx.q, bExp);
    if (!(bVal <= (1.0L - kRadiusGuard) * ctx.radius()))
        raise(Errc::OutsideRadiusOfConvergence,
              "b = " + format_real(bVal, 6) + " not strictly inside radius " +
                  format_real(ctx.radius(), 6));
}

Real taylor_gap(const BoundProblem& problem, Real x) {
    return q_exponential(problem.ctx, x).value - taylor_sum(problem, x);
}

Real lower_bound(const BoundProblem& problem, Real x) {
    return bound_at(problem, x, problem.left_endpoint());
}

Real upper_bound(const BoundProblem& problem, Real x) {
    return bound_at(problem, x, problem.b());
}

BoundReport sandwich_report(const BoundProblem& problem, Real tol,
                            const std::vector<Real>& offLatticeXs) {
    require_resolvable_anchor(problem);
    BoundReport report;
    report.tol = tol;
    report.allPassed = true;

    auto evaluate = [&](Real x, long xExp, bool onLattice) {
        BoundRow row;
        row.x = x;
        row.xExp = xExp;
        row.onLattice = onLattice;
        const QSeriesResult exact = q_exponential(problem.ctx, x);
        report.maxTermsUsed = std::max(report.maxTermsUsed, exact.termsUsed);
        row.exact = exact.value;
        row.lower = lower_bound(problem, x);
        row.upper = upper_bound(problem, x);
        row.lowerMargin = row.exact - row.lower;
        row.upperMargin = row.upper - row.exact;
        if (onLattice && (row.lowerMargin < -tol || row.upperMargin < -tol))
            report.allPassed = false;
        report.rows.push_back(row);
    };

    for (long k = problem.aExp - 1; k >= problem.bExp; --k)
        evaluate(power_int(problem.ctx.q, k), k, true);
    for (Real x : offLatticeXs) {
        require_in_range(problem, x);
        evaluate(x, 0, false);
    }
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const BoundRow& lhs, const BoundRow& rhs) { return lhs.x < rhs.x; });

    report.endpointEqualityLower = std::fabs(report.rows.front().lower - report.rows.front().exact);
    report.endpointEqualityUpper = std::fabs(report.rows.back().upper - report.rows.back().exact);
    if (report.endpointEqualityLower > tol || report.endpointEqualityUpper > tol)
        report.allPassed = false;
    return report;
}

ChainReport verify_derivative_chain(const BoundProblem& problem, Real tol) {
    // k-fold backward differences divide by the lattice gaps k times, so the
    // series budget here must sit far below the vanish tolerance
    QContext ctx = problem.ctx;
    ctx.tailTol = std::min(ctx.tailTol, 1e-18L);
    const BoundProblem tight(ctx, problem.aExp, problem.bExp, problem.n);
    require_resolvable_anchor(tight);

    ChainReport report;
    report.n = problem.n;
    report.tol = tol;

    // lattice extended n steps below a so that n-fold backward differences
    // at a stay inside the scale
    const TimeScale scale =
        TimeScale::qscale(ctx.q, problem.bExp, problem.aExp + problem.n, false);
    const TsInterval whole = TsInterval::closed(scale.min_point(), scale.max_point());
    const Real a = problem.a();

    const GridFunction gapFn =
        GridFunction::sample(scale, whole, [&](Real x) { return taylor_gap(tight, x); });
    const GridFunction polyFn =
        GridFunction::sample(scale, whole, [&](Real x) { return q_poly(ctx, x, a, problem.n); });

    const ScalePoint aPoint = scale.q_point(problem.aExp);
    const ScalePoint sigmaA = scale.q_point(problem.aExp - 1);
    const ScalePoint bPoint = scale.q_point(problem.bExp);
    const auto ratioPts = scale.points_in(TsInterval::closed(sigmaA, bPoint));

    const Real factorialN = q_factorial(ctx, problem.n);
    report.vanishOk = true;
    report.ratiosIncreasing = true;
    report.topConstantExact = chain_coefficient(ctx, problem.n, problem.n) == factorialN;

    std::vector<Real> bottomRatios; // k = 0 ratio f/g for the endpoint sandwich
    for (int k = 0; k <= problem.n; ++k) {
        ChainStage stage;
        stage.k = k;
        const GridFunction fk = gapFn.iterate_derivative(k, DerivKind::Nabla);
        const GridFunction gk = polyFn.iterate_derivative(k, DerivKind::Nabla);

        stage.fAtA = fk(aPoint);
        stage.gAtA = gk(aPoint);
        if (k < problem.n &&
            (std::fabs(stage.fAtA) > tol || std::fabs(stage.gAtA) > tol))
            report.vanishOk = false;

        const Real coeff = chain_coefficient(ctx, problem.n, k);
        std::vector<Real> ratios;
        ratios.reserve(ratioPts.size());
        for (const auto& p : ratioPts) {
            const Real gNumeric = gk(p);
            const Real gClosed = coeff * q_poly(ctx, p.value(), a, problem.n - k);
            stage.closedFormGap =
                std::max(stage.closedFormGap, std::fabs(gNumeric - gClosed));
            ratios.push_back(fk(p) / gNumeric);
            if (k == problem.n) {
                report.topConstantMaxDev =
                    std::max(report.topConstantMaxDev, std::fabs(gNumeric - factorialN));
                const Real seriesRatio = q_exponential(ctx, p.value()).value / factorialN;
                report.topRatioMaxDev =
                    std::max(report.topRatioMaxDev, std::fabs(ratios.back() - seriesRatio));
            }
        }
        stage.ratioVerdict = classify_value_sequence(ratioPts, ratios, tol);
        if (stage.ratioVerdict.kind != MonoKind::StrictlyIncreasing)
            report.ratiosIncreasing = false;
        if (k == 0) bottomRatios = ratios;
        report.stages.push_back(std::move(stage));
    }

    report.endpointSandwichOk = true;
    const Real first = bottomRatios.front();
    const Real last = bottomRatios.back();
    for (const Real r : bottomRatios)
        if (r < first - tol || r > last + tol) report.endpointSandwichOk = false;

    const Real topScale = std::max<Real>(1.0L, factorialN);
    report.allPassed = report.vanishOk && report.topConstantExact &&
                       report.topConstantMaxDev <= tol * topScale &&
                       report.topRatioMaxDev <= tol * topScale && report.ratiosIncreasing &&
                       report.endpointSandwichOk;
    return report;
}

} // namespace tsc
