#pragma once

#include "tsc/error.hpp"
#include "tsc/real.hpp"

#include <functional>
#include <optional>

namespace tsc {

/// Base and evaluation policy for the q-calculus kernels. The precision
/// field is a decimal digit request: evaluation runs at precision + 10 guard
/// digits, escalating to wider internal floats when that exceeds the native
/// extended format.
struct QContext {
    Real q;
    int precision = 18;
    Real tailTol = 1e-14L;

    explicit QContext(Real q_, int precision_ = 18, Real tailTol_ = 1e-14L)
        : q(q_), precision(precision_), tailTol(tailTol_) {
        if (!(q > 0.0L && q < 1.0L))
            raise(Errc::InvalidArgument, "q must satisfy 0 < q < 1");
        if (precision < 1) raise(Errc::InvalidArgument, "precision must be >= 1 digit");
        if (!(tailTol > 0.0L)) raise(Errc::InvalidArgument, "tail tolerance must be positive");
    }

    /// Convergence radius 1/(1-q) of the exponential series; always derived,
    /// never cached.
    Real radius() const { return 1.0L / (1.0L - q); }
};

/// Certified partial sum: tailBound is a proven bound on the discarded tail.
struct QSeriesResult {
    Real value = 0;
    long termsUsed = 0;
    Real tailBound = 0;
};

/// [alpha] = (q^alpha - 1)/(q - 1).
Real q_number(const QContext& ctx, Real alpha);

/// [n]! = [n][n-1]...[1], with [0]! = 1.
Real q_factorial(const QContext& ctx, int n);

/// (x - a)^n_q = (x-a)(x-qa)...(x-q^{n-1}a), with the empty product = 1.
Real q_poly(const QContext& ctx, Real x, Real a, int n);

/// D_q f(x) = (f(qx) - f(x)) / ((q-1)x) for x != 0; at x = 0 the supplied
/// classical derivative value is used.
Real q_derivative(const QContext& ctx, const std::function<Real(Real)>& f, Real x,
                  std::optional<Real> derivAtZero = std::nullopt);

/// k-fold q-derivative via the difference triangle over {x, qx, ..., q^k x}.
Real q_derivative_iter(const QContext& ctx, const std::function<Real(Real)>& f, Real x, int k);

/// Partial sum of sum_k x^k/[k]! with a geometric tail certificate.
/// Requires |x| strictly inside the convergence radius (with a guard band).
QSeriesResult q_exponential(const QContext& ctx, Real x);

} // namespace tsc
