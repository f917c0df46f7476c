#pragma once

#include "tsc/scale.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tsc {

enum class DerivKind { Delta, Nabla };

enum class MonoKind {
    StrictlyIncreasing,
    StrictlyDecreasing,
    NonDecreasing,
    NonIncreasing,
    Neither,
    Vacuous,
};

const char* mono_kind_name(MonoKind kind);

/// Adjacent pair breaking monotonicity, reported on a Neither verdict.
struct MonoWitness {
    ScalePoint at;
    ScalePoint next;
    Real value = 0;
    Real nextValue = 0;
};

struct MonotonicityVerdict {
    MonoKind kind = MonoKind::Vacuous;
    std::optional<MonoWitness> witness; // present iff kind == Neither
    Real tolerance = 0;

    bool is_monotone() const {
        return kind == MonoKind::StrictlyIncreasing || kind == MonoKind::StrictlyDecreasing ||
               kind == MonoKind::NonDecreasing || kind == MonoKind::NonIncreasing;
    }
    bool is_increasing() const {
        return kind == MonoKind::StrictlyIncreasing || kind == MonoKind::NonDecreasing;
    }
    bool is_decreasing() const {
        return kind == MonoKind::StrictlyDecreasing || kind == MonoKind::NonIncreasing;
    }
    bool strict() const {
        return kind == MonoKind::StrictlyIncreasing || kind == MonoKind::StrictlyDecreasing;
    }
};

/// Result of the Cauchy mean value scan: derivative-ratio extrema bracketing
/// the finite-increment ratio.
struct MvtWitnesses {
    ScalePoint minRatioPoint;
    ScalePoint maxRatioPoint;
    Real lowerRatio = 0;
    Real middleRatio = 0;
    Real upperRatio = 0;
};

/// A function living on a time-scale interval: either a table of values on
/// the scale points, or an analytic evaluator (with an optional analytic
/// derivative for dense points). Immutable; all operations return new objects.
class GridFunction {
public:
    using Evaluator = std::function<Real(Real)>;

    static GridFunction table(TimeScale scale, TsInterval domain, std::vector<Real> values);
    /// Table built by sampling fn at every domain point.
    static GridFunction sample(TimeScale scale, TsInterval domain, const Evaluator& fn);
    static GridFunction analytic(TimeScale scale, TsInterval domain, Evaluator fn,
                                 Evaluator derivative = {});

    const TimeScale& scale() const { return scale_; }
    const TsInterval& domain() const { return domain_; }
    bool is_table() const { return table_; }
    bool has_analytic_derivative() const { return static_cast<bool>(deriv_); }

    /// Domain points (discrete scales).
    const std::vector<ScalePoint>& domain_points() const;
    const std::vector<Real>& table_values() const;

    Real operator()(const ScalePoint& t) const;
    /// Evaluate at a raw coordinate (analytic sources / continuous scales).
    Real eval_value(Real x) const;

    GridFunction delta_derivative() const;
    GridFunction nabla_derivative() const;
    GridFunction derivative(DerivKind kind) const;
    /// k-fold derivative; k = 0 returns *this.
    GridFunction iterate_derivative(int k, DerivKind kind) const;

    MonotonicityVerdict classify_monotonicity(const TsInterval& iv, Real tol) const;
    MonotonicityVerdict classify_monotonicity(Real tol) const;

    /// Same source on a sub-interval of the domain.
    GridFunction restricted(const TsInterval& sub) const;

    /// f*(s) = f(-s) on the reflected scale.
    GridFunction dual_function() const;

private:
    GridFunction() = default;

    Real value_at(std::size_t pos) const;

    TimeScale scale_ = TimeScale::finite({0.0L});
    TsInterval domain_ = TsInterval::closed(ScalePoint{}, ScalePoint{});
    bool table_ = true;
    std::vector<ScalePoint> pts_; // discrete domain points
    std::vector<Real> values_;    // table values aligned with pts_
    Evaluator eval_;
    Evaluator deriv_;
};

/// Monotonicity verdict for an explicit (points, values) sequence.
MonotonicityVerdict classify_value_sequence(const std::vector<ScalePoint>& pts,
                                            const std::vector<Real>& vals, Real tol);

/// Cumulative inverse of the delta derivative: builds f with f(anchor) = f0
/// and f(sigma(t)) = f(t) + mu(t) * rate(t), walking forward from anchor.
GridFunction delta_integrate(const GridFunction& rate, const ScalePoint& anchor, Real f0);

/// Scans the derivative ratio over [a, x[ and returns argmin/argmax together
/// with the finite-increment ratio they bracket.
MvtWitnesses cauchy_mvt_witnesses(const GridFunction& F, const GridFunction& G,
                                  const ScalePoint& a, const ScalePoint& x);

/// CSV ingestion, header "t,f" or "t,f,g": one row per scale point, in order.
/// Lattice/finite point values must match exactly; q-scale rows are matched
/// by position (exponent) within 1e-9 relative.
struct CsvFunctions {
    GridFunction f;
    std::optional<GridFunction> g;
};

CsvFunctions read_csv_functions(std::istream& in, const TimeScale& scale);
CsvFunctions read_csv_file(const std::string& path, const TimeScale& scale);

} // namespace tsc
