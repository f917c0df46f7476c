#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "tsc/qbounds.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

using namespace tsc;
using tsc::test::near_rel;

namespace {

using Float50 = boost::multiprecision::cpp_bin_float_50;

// Literal transliteration of the two bound formulas in 50-digit arithmetic,
// sharing no code with the implementation.

Float50 o_exp(const Float50& q, const Float50& x) {
    Float50 sum = 0, power = 1, fact = 1;
    for (int k = 0; k < 600; ++k) {
        if (k > 0) {
            fact *= (boost::multiprecision::pow(q, k) - 1) / (q - 1);
            power *= x;
        }
        sum += power / fact;
    }
    return sum;
}

Float50 o_fact(const Float50& q, int n) {
    Float50 f = 1;
    for (int k = 1; k <= n; ++k) f *= (boost::multiprecision::pow(q, k) - 1) / (q - 1);
    return f;
}

Float50 o_poly(const Float50& q, const Float50& x, const Float50& a, int n) {
    Float50 r = 1;
    for (int j = 0; j < n; ++j) r *= x - boost::multiprecision::pow(q, j) * a;
    return r;
}

Float50 o_taylor(const Float50& q, const Float50& a, int n, const Float50& x) {
    Float50 s = 0;
    for (int k = 0; k < n; ++k) s += o_exp(q, a) / o_fact(q, k) * o_poly(q, x, a, k);
    return s;
}

Float50 o_lower(const Float50& q, long aExp, long bExp, int n, const Float50& x) {
    (void)bExp;
    const Float50 a = boost::multiprecision::pow(q, static_cast<int>(aExp));
    const Float50 anchor = a / q;
    return o_taylor(q, a, n, x) + 1 / o_poly(q, anchor, a, n) *
                                      (o_exp(q, anchor) - o_taylor(q, a, n, anchor)) *
                                      o_poly(q, x, a, n);
}

Float50 o_upper(const Float50& q, long aExp, long bExp, int n, const Float50& x) {
    const Float50 a = boost::multiprecision::pow(q, static_cast<int>(aExp));
    const Float50 b = boost::multiprecision::pow(q, static_cast<int>(bExp));
    return o_taylor(q, a, n, x) + 1 / o_poly(q, b, a, n) *
                                      (o_exp(q, b) - o_taylor(q, a, n, b)) * o_poly(q, x, a, n);
}

} // namespace

TEST_CASE("bound problem validation") {
    QContext ctx(0.5L);
    CHECK_THROWS_AS(BoundProblem(ctx, 4, 0, 0), Error);  // n < 1
    CHECK_THROWS_AS(BoundProblem(ctx, 0, 4, 2), Error);  // a >= b
    CHECK_THROWS_AS(BoundProblem(ctx, 4, -1, 2), Error); // b = 2 = radius
    BoundProblem ok(ctx, 4, 0, 2);
    CHECK(ok.a() == 0.0625L);
    CHECK(ok.b() == 1.0L);
    CHECK(ok.left_endpoint() == 0.125L);
}

TEST_CASE("gap function") {
    QContext ctx(0.5L, 18, 1e-16L);
    BoundProblem p2(ctx, 2, 0, 2);

    // at the anchor every polynomial term past k=0 carries the factor (a-a)
    CHECK(taylor_gap(p2, p2.a()) == 0.0L);

    BoundProblem p1(ctx, 2, 0, 1);
    const Real expA = q_exponential(ctx, p1.a()).value;
    for (Real x : {0.5L, 1.0L})
        CHECK(taylor_gap(p1, x) == q_exponential(ctx, x).value - expA);

    // order-2 instance against the 50-digit transliteration
    const Float50 want = o_exp(Float50(0.5), Float50(0.5)) -
                         o_taylor(Float50(0.5), Float50(0.25), 2, Float50(0.5));
    CHECK(near_rel(taylor_gap(p2, 0.5L), want.convert_to<Real>(), 1e-15L));
}

TEST_CASE("bounds touch the series at their construction points") {
    for (Real q : {0.3L, 0.5L, 0.9L}) {
        for (int n : {1, 2, 3, 4}) {
            QContext ctx(q, 18, 1e-16L);
            BoundProblem p(ctx, 4, 0, n);
            const Real atLeft = p.left_endpoint();
            CHECK(std::fabs(lower_bound(p, atLeft) - q_exponential(ctx, atLeft).value) <= 1e-14L);
            CHECK(std::fabs(upper_bound(p, p.b()) - q_exponential(ctx, p.b()).value) <= 1e-14L);
        }
    }
}

TEST_CASE("order one reduces to the secant line") {
    QContext ctx(0.5L, 18, 1e-16L);
    BoundProblem p(ctx, 3, 0, 1);
    const Real a = p.a();
    const Real expA = q_exponential(ctx, a).value;

    const Real lo = p.left_endpoint();
    const Real slopeL = (q_exponential(ctx, lo).value - expA) / (lo - a);
    const Real hi = p.b();
    const Real slopeU = (q_exponential(ctx, hi).value - expA) / (hi - a);
    for (Real x : {0.25L, 0.5L, 1.0L}) { // certified interval starts at a/q
        CHECK(near_rel(lower_bound(p, x), expA + slopeL * (x - a), 1e-15L));
        CHECK(near_rel(upper_bound(p, x), expA + slopeU * (x - a), 1e-15L));
    }
}

TEST_CASE("bounds match the raised-precision transliteration") {
    for (Real q : {0.3L, 0.5L, 0.9L}) {
        for (int n : {1, 2, 3, 4}) {
            QContext ctx(q, 18, 1e-16L);
            BoundProblem p(ctx, 4, 0, n);
            for (long k = 3; k >= 0; --k) {
                const Real x = power_int(q, k);
                const Real wantL =
                    o_lower(Float50(q), 4, 0, n, Float50(x)).convert_to<Real>();
                const Real wantU =
                    o_upper(Float50(q), 4, 0, n, Float50(x)).convert_to<Real>();
                CHECK(near_rel(lower_bound(p, x), wantL, 1e-10L));
                CHECK(near_rel(upper_bound(p, x), wantU, 1e-10L));
            }
        }
    }
}

TEST_CASE("evaluation outside the certified interval is rejected") {
    QContext ctx(0.5L);
    BoundProblem p(ctx, 4, 0, 2);
    CHECK_THROWS_AS(lower_bound(p, 0.01L), Error);
    CHECK_THROWS_AS(upper_bound(p, 1.5L), Error);
}

TEST_CASE("instances below the noise floor are refused, not misjudged") {
    // deep anchor + high order: the anchor gap sinks under the series noise
    QContext ctx(0.3L, 18, 1e-14L);
    BoundProblem p(ctx, 7, 0, 6);
    CHECK_THROWS_AS(sandwich_report(p, 1e-10L), Error);
    try {
        sandwich_report(p, 1e-10L);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::PrecisionUnsupported);
    }
    CHECK_THROWS_AS(verify_derivative_chain(BoundProblem(ctx, 9, 0, 6), 1e-10L), Error);
}

TEST_CASE("sandwich report over the lattice") {
    QContext ctx(0.5L);
    BoundProblem p(ctx, 4, 0, 3);
    const auto report = sandwich_report(p, 1e-10L);
    REQUIRE(report.rows.size() == 4); // q^3, q^2, q, 1
    CHECK(report.allPassed);
    CHECK(report.rows.front().x == 0.125L);
    CHECK(report.rows.back().x == 1.0L);
    CHECK(report.endpointEqualityLower <= 1e-12L);
    CHECK(report.endpointEqualityUpper <= 1e-12L);
    CHECK(report.maxTermsUsed > 3);
    for (const auto& row : report.rows) {
        CHECK(row.lowerMargin >= -1e-12L);
        CHECK(row.upperMargin >= -1e-12L);
        CHECK(row.onLattice);
    }
}

TEST_CASE("degenerate interval has a single row") {
    QContext ctx(0.5L);
    BoundProblem p(ctx, 1, 0, 2);
    const auto report = sandwich_report(p, 1e-10L);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows.front().x == 1.0L);
    CHECK(report.allPassed);
}

TEST_CASE("off-lattice points are reported but not judged") {
    QContext ctx(0.5L);
    BoundProblem p(ctx, 4, 0, 2);
    const auto report = sandwich_report(p, 1e-10L, {0.6L});
    REQUIRE(report.rows.size() == 5);
    bool sawOff = false;
    for (const auto& row : report.rows)
        if (!row.onLattice) {
            sawOff = true;
            CHECK(row.x == 0.6L);
        }
    CHECK(sawOff);
    CHECK(report.allPassed);
    CHECK_THROWS_AS(sandwich_report(p, 1e-10L, {0.01L}), Error);
}

TEST_CASE("proof ladder on the lattice") {
    for (Real q : {0.3L, 0.5L, 0.9L}) {
        for (int n : {1, 2, 3}) {
            QContext ctx(q, 18, 1e-16L);
            BoundProblem p(ctx, 4, 0, n);
            const auto chain = verify_derivative_chain(p, 1e-10L);
            CHECK(chain.allPassed);
            CHECK(chain.vanishOk);
            CHECK(chain.topConstantExact);
            CHECK(chain.ratiosIncreasing);
            CHECK(chain.endpointSandwichOk);
            CHECK(chain.topConstantMaxDev <= 1e-10L);
            CHECK(chain.topRatioMaxDev <= 1e-10L);
            REQUIRE(chain.stages.size() == static_cast<std::size_t>(n) + 1);
            for (const auto& stage : chain.stages) {
                if (stage.k < n) {
                    CHECK(std::fabs(stage.fAtA) <= 1e-10L);
                    CHECK(std::fabs(stage.gAtA) <= 1e-10L);
                }
                CHECK(stage.ratioVerdict.kind == MonoKind::StrictlyIncreasing);
            }
        }
    }
}
