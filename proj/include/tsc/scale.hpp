#pragma once

#include "tsc/error.hpp"
#include "tsc/real.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace tsc {

enum class ScaleKind { Continuous, Lattice, QScale, Finite };

const char* scale_kind_name(ScaleKind kind);

/// A point of a time scale. Discrete points carry their position inside the
/// owning scale (and, on q-scales, the integer exponent), so jump operations
/// are integer arithmetic and never drift.
class ScalePoint {
public:
    enum class Rep { Value, QExp, Zero };

    ScalePoint() = default;

    Rep rep() const { return rep_; }
    Real value() const { return value_; }
    /// Exponent k with value == q^k. Only meaningful for Rep::QExp.
    long exponent() const { return exponent_; }
    /// Position in the owning discrete scale; -1 for continuous points.
    long index() const { return index_; }

    bool operator==(const ScalePoint& other) const {
        return value_ == other.value_ && rep_ == other.rep_;
    }
    bool operator<(const ScalePoint& other) const { return value_ < other.value_; }
    bool operator<=(const ScalePoint& other) const { return value_ <= other.value_; }

private:
    friend class TimeScale;
    ScalePoint(Rep rep, Real value, long index, long exponent)
        : rep_(rep), value_(value), index_(index), exponent_(exponent) {}

    Rep rep_ = Rep::Value;
    Real value_ = 0;
    long index_ = -1;
    long exponent_ = 0;
};

/// Density flags of a point. The dense/scattered pair on each side is
/// exclusive for points that are not the scale minimum/maximum; at an
/// extremum the flags for the missing side are both false.
struct PointClass {
    bool rightDense = false;
    bool rightScattered = false;
    bool leftDense = false;
    bool leftScattered = false;
};

/// Interval with endpoints on the scale and open/closed flags per side.
class TsInterval {
public:
    /// Degenerate closed interval [0, 0]; placeholder until assigned.
    TsInterval() = default;

    static TsInterval closed(const ScalePoint& lo, const ScalePoint& hi) {
        return TsInterval(lo, hi, false, false);
    }
    static TsInterval open(const ScalePoint& lo, const ScalePoint& hi) {
        return TsInterval(lo, hi, true, true);
    }
    static TsInterval open_closed(const ScalePoint& lo, const ScalePoint& hi) {
        return TsInterval(lo, hi, true, false);
    }
    static TsInterval closed_open(const ScalePoint& lo, const ScalePoint& hi) {
        return TsInterval(lo, hi, false, true);
    }

    const ScalePoint& lower() const { return lower_; }
    const ScalePoint& upper() const { return upper_; }
    bool lower_open() const { return lowerOpen_; }
    bool upper_open() const { return upperOpen_; }

    bool contains_value(Real v) const {
        if (lowerOpen_ ? !(v > lower_.value()) : !(v >= lower_.value())) return false;
        if (upperOpen_ ? !(v < upper_.value()) : !(v <= upper_.value())) return false;
        return true;
    }

private:
    TsInterval(const ScalePoint& lo, const ScalePoint& hi, bool lo_open, bool hi_open)
        : lower_(lo), upper_(hi), lowerOpen_(lo_open), upperOpen_(hi_open) {
        if (lo.value() > hi.value())
            raise(Errc::InvalidArgument, "interval lower endpoint exceeds upper endpoint");
    }

    ScalePoint lower_;
    ScalePoint upper_;
    bool lowerOpen_ = false;
    bool upperOpen_ = false;
};

/// Immutable time scale. Discrete families (lattice, q-scale, finite set)
/// materialize their point values once at construction; every operation and
/// every consumer sees the same bits.
class TimeScale {
public:
    static TimeScale continuous(Real lo, Real hi);
    static TimeScale lattice(Real origin, Real step, long count);
    /// Points q^k for k in [kMin, kMax] (larger exponent = smaller point),
    /// optionally together with the accumulation point 0.
    static TimeScale qscale(Real q, long kMin, long kMax, bool includeZero = false);
    static TimeScale finite(std::vector<Real> points);

    /// Textual forms:
    ///   "continuous LO HI"
    ///   "lattice origin=O step=S count=N"
    ///   "qscale q=Q kmin=A kmax=B [zero]"
    ///   "finite P1,P2,..."
    static TimeScale parse(std::string_view text);

    ScaleKind kind() const;
    bool discrete() const { return kind() != ScaleKind::Continuous; }
    /// Number of represented points (discrete families only).
    std::size_t size() const;

    Real min_value() const;
    Real max_value() const;
    ScalePoint min_point() const;
    ScalePoint max_point() const;

    bool contains(const ScalePoint& t) const;
    bool contains_value(Real v) const;

    ScalePoint point_at(std::size_t index) const;
    /// Point with exactly this value; throws PointNotInScale otherwise.
    ScalePoint point(Real value) const;
    /// q-scale point q^k.
    ScalePoint q_point(long k) const;
    /// The q-scale accumulation point (requires includeZero).
    ScalePoint zero_point() const;

    std::vector<ScalePoint> all_points() const;
    std::vector<ScalePoint> points_in(const TsInterval& iv) const;

    ScalePoint sigma(const ScalePoint& t) const;
    ScalePoint rho(const ScalePoint& t) const;
    /// Forward graininess sigma(t) - t.
    Real mu(const ScalePoint& t) const;
    /// Backward graininess t - rho(t).
    Real nu(const ScalePoint& t) const;
    PointClass classify(const ScalePoint& t) const;

    /// The reflected scale {-t : t in this scale}. Point values of the dual
    /// are exact negations, so delta/nabla identities transfer bit-for-bit.
    TimeScale dual() const;

    // family accessors
    Real q() const;
    long k_min() const;
    long k_max() const;
    bool include_zero() const;
    Real lattice_origin() const;
    Real lattice_step() const;
    Real continuous_lo() const;
    Real continuous_hi() const;
    /// Exponent of the point at this index (q-scale, positive points).
    long exponent_at(std::size_t index) const;

    std::string describe() const;

    /// True when both objects are backed by the same materialization.
    bool same_as(const TimeScale& other) const { return data_ == other.data_; }

    /// Same point set bit-for-bit (and same zero semantics); two dual() calls
    /// on one scale produce equivalent results.
    bool equivalent(const TimeScale& other) const;

    /// Index of t within a discrete scale, or -1 when absent.
    long index_of(const ScalePoint& t) const;

private:
    struct Data;
    explicit TimeScale(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

    const Data& d() const { return *data_; }
    ScalePoint make_point(long index) const;

    std::shared_ptr<const Data> data_;
};

} // namespace tsc
