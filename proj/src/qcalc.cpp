#include "tsc/qcalc.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <vector>

namespace tsc {

namespace {

constexpr long kMaxSeriesTerms = 1000000;
constexpr Real kRadiusGuard = 1e-9L;
constexpr int kGuardDigits = 10;

using Float50 = boost::multiprecision::cpp_bin_float_50;
using Float100 = boost::multiprecision::cpp_bin_float_100;

template <class S>
struct SeriesSum {
    S value;
    long termsUsed;
    S tailBound;
    bool certified;
};

/// Sum of x^k/[k]! until the remaining tail is provably below tailTol.
/// The term ratio |x|/[k+1] decreases towards |x|(1-q) < 1, so once it drops
/// below one the tail is dominated by a geometric series.
template <class S>
SeriesSum<S> exp_series(const S& q, const S& x, const S& tailTol, long maxTerms) {
    using std::abs;
    if (x == 0) return {S(1), 1, S(0), true};
    const S absX = abs(x);
    S sum = 1;
    S term = 1;
    S qnum = 0; // [k]
    for (long k = 0; k < maxTerms; ++k) {
        qnum = 1 + q * qnum; // [k+1]
        term = term * x / qnum;
        sum += term;
        const S nextQnum = 1 + q * qnum; // [k+2]
        const S ratio = absX / nextQnum;
        if (ratio < 1) {
            const S tail = abs(term) * ratio / (1 - ratio);
            if (tail <= tailTol) return {sum, k + 2, tail, true};
        }
    }
    return {sum, maxTerms + 1, S(0), false};
}

} // namespace

Real q_number(const QContext& ctx, Real alpha) {
    return (std::pow(ctx.q, alpha) - 1.0L) / (ctx.q - 1.0L);
}

Real q_factorial(const QContext& ctx, int n) {
    if (n < 0) raise(Errc::NegativeN, "q-factorial needs n >= 0");
    Real result = 1.0L;
    Real qnum = 0.0L;
    for (int k = 1; k <= n; ++k) {
        qnum = 1.0L + ctx.q * qnum; // [k] = 1 + q[k-1]
        result *= qnum;
    }
    return result;
}

Real q_poly(const QContext& ctx, Real x, Real a, int n) {
    if (n < 0) raise(Errc::NegativeN, "q-shifted power needs n >= 0");
    Real result = 1.0L;
    Real shifted = a; // q^j a
    for (int j = 0; j < n; ++j) {
        result *= (x - shifted);
        shifted *= ctx.q;
    }
    return result;
}

Real q_derivative(const QContext& ctx, const std::function<Real(Real)>& f, Real x,
                  std::optional<Real> derivAtZero) {
    if (x == 0.0L) {
        if (!derivAtZero)
            raise(Errc::MissingDerivativeAtZero,
                  "q-derivative at 0 needs the classical derivative value");
        return *derivAtZero;
    }
    return (f(ctx.q * x) - f(x)) / ((ctx.q - 1.0L) * x);
}

Real q_derivative_iter(const QContext& ctx, const std::function<Real(Real)>& f, Real x, int k) {
    if (k < 0) raise(Errc::InvalidArgument, "derivative order must be >= 0");
    if (k == 0) return f(x);
    if (x == 0.0L)
        raise(Errc::MissingDerivativeAtZero, "iterated q-derivative at 0 is not supported");
    // difference triangle over the geometric points x, qx, ..., q^k x
    std::vector<Real> points(static_cast<std::size_t>(k) + 1);
    std::vector<Real> values(points.size());
    points[0] = x;
    for (std::size_t j = 1; j < points.size(); ++j) points[j] = ctx.q * points[j - 1];
    for (std::size_t j = 0; j < points.size(); ++j) values[j] = f(points[j]);
    for (int level = 1; level <= k; ++level) {
        const auto width = static_cast<std::size_t>(k - level);
        for (std::size_t j = 0; j <= width; ++j)
            values[j] = (values[j + 1] - values[j]) / ((ctx.q - 1.0L) * points[j]);
    }
    return values[0];
}

QSeriesResult q_exponential(const QContext& ctx, Real x) {
    const Real radius = ctx.radius();
    if (!(std::fabs(x) <= (1.0L - kRadiusGuard) * radius))
        raise(Errc::OutsideRadiusOfConvergence,
              "|x| = " + format_real(std::fabs(x), 6) + " not strictly inside radius " +
                  format_real(radius, 6));

    const int digits = ctx.precision + kGuardDigits;
    if (digits <= 18) {
        const auto s = exp_series<Real>(ctx.q, x, ctx.tailTol, kMaxSeriesTerms);
        if (!s.certified)
            raise(Errc::TailNotCertified, "series tail not certified within term cap");
        return {s.value, s.termsUsed, s.tailBound};
    }
    if (digits <= 50) {
        const auto s =
            exp_series<Float50>(Float50(ctx.q), Float50(x), Float50(ctx.tailTol), kMaxSeriesTerms);
        if (!s.certified)
            raise(Errc::TailNotCertified, "series tail not certified within term cap");
        return {s.value.convert_to<Real>(), s.termsUsed, s.tailBound.convert_to<Real>()};
    }
    if (digits <= 100) {
        const auto s = exp_series<Float100>(Float100(ctx.q), Float100(x), Float100(ctx.tailTol),
                                            kMaxSeriesTerms);
        if (!s.certified)
            raise(Errc::TailNotCertified, "series tail not certified within term cap");
        return {s.value.convert_to<Real>(), s.termsUsed, s.tailBound.convert_to<Real>()};
    }
    raise(Errc::PrecisionUnsupported,
          "requested " + std::to_string(ctx.precision) + " digits; at most 90 are supported");
}

} // namespace tsc
