#pragma once

#include "tsc/gridfn.hpp"
#include "tsc/qcalc.hpp"

#include <vector>

namespace tsc {

/// A bound instance: base context, lattice exponents of the expansion point
/// a = q^aExp and the right endpoint b = q^bExp, and the polynomial order n.
/// The certified interval is [a/q, b] on the q-lattice.
struct BoundProblem {
    QContext ctx;
    long aExp;
    long bExp;
    int n;

    BoundProblem(QContext context, long aExponent, long bExponent, int order);

    Real a() const { return power_int(ctx.q, aExp); }
    Real b() const { return power_int(ctx.q, bExp); }
    /// Left endpoint a/q = q^{aExp-1} of the certified interval.
    Real left_endpoint() const { return power_int(ctx.q, aExp - 1); }
};

/// Difference between the series and its order-n lattice Taylor polynomial
/// anchored at a; vanishes with its first n-1 backward differences at a.
Real taylor_gap(const BoundProblem& problem, Real x);

Real lower_bound(const BoundProblem& problem, Real x);
Real upper_bound(const BoundProblem& problem, Real x);

struct BoundRow {
    Real x = 0;
    long xExp = 0;
    bool onLattice = true;
    Real lower = 0;
    Real exact = 0;
    Real upper = 0;
    Real lowerMargin = 0; // exact - lower
    Real upperMargin = 0; // upper - exact
};

struct BoundReport {
    std::vector<BoundRow> rows; // ascending x
    bool allPassed = false;     // lattice rows only
    Real endpointEqualityLower = 0; // |L(a/q) - e^{a/q}|
    Real endpointEqualityUpper = 0; // |U(b) - e^b|
    Real tol = 0;
    long maxTermsUsed = 0;
};

/// Evaluates lower/exact/upper at every lattice point of [a/q, b]. Extra
/// off-lattice abscissae are reported but never counted in allPassed.
BoundReport sandwich_report(const BoundProblem& problem, Real tol,
                            const std::vector<Real>& offLatticeXs = {});

struct ChainStage {
    int k = 0;
    Real fAtA = 0; // k-fold backward difference of the gap at a
    Real gAtA = 0;
    MonotonicityVerdict ratioVerdict; // of f-chain/g-chain on [sigma(a), b]
    Real closedFormGap = 0;           // numeric g-chain vs closed form, max abs
};

struct ChainReport {
    int n = 0;
    Real tol = 0;
    std::vector<ChainStage> stages; // k = 0..n
    bool vanishOk = false;          // stages k < n vanish at a
    bool topConstantExact = false;  // closed-form n-fold g-chain == [n]! bitwise
    Real topConstantMaxDev = 0;     // numeric n-fold g-chain vs [n]!
    Real topRatioMaxDev = 0;        // top ratio vs series/[n]!
    bool ratiosIncreasing = false;
    bool endpointSandwichOk = false;
    bool allPassed = false;
};

/// Replays the proof ladder on the q-lattice: vanishing backward differences
/// at a, the constant top of the g-chain, monotone ratios at every level and
/// the endpoint sandwich that yields the bounds.
ChainReport verify_derivative_chain(const BoundProblem& problem, Real tol);

} // namespace tsc
