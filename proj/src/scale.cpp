#include "tsc/scale.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace tsc {

namespace {

constexpr long kMaxExponentMagnitude = 100000;
constexpr long kMaxPointCount = 2000000;

Real parse_real_token(const std::string& token, const std::string& what) {
    char* end = nullptr;
    errno = 0;
    const Real v = std::strtold(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0' || errno == ERANGE)
        raise(Errc::InvalidScaleSpec, "cannot parse " + what + " from '" + token + "'");
    return v;
}

long parse_long_token(const std::string& token, const std::string& what) {
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0' || errno == ERANGE)
        raise(Errc::InvalidScaleSpec, "cannot parse " + what + " from '" + token + "'");
    return v;
}

std::vector<std::string> split_ws(std::string_view text) {
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

} // namespace

const char* scale_kind_name(ScaleKind kind) {
    switch (kind) {
    case ScaleKind::Continuous: return "continuous";
    case ScaleKind::Lattice: return "lattice";
    case ScaleKind::QScale: return "qscale";
    case ScaleKind::Finite: return "finite";
    }
    return "?";
}

struct TimeScale::Data {
    ScaleKind kind = ScaleKind::Finite;
    // continuous
    Real lo = 0, hi = 0;
    // lattice
    Real origin = 0, step = 0;
    long count = 0;
    // qscale
    Real q = 0;
    long kMin = 0, kMax = 0;
    bool includeZero = false;
    // ascending materialized points (discrete families)
    std::vector<Real> pts;
};

TimeScale TimeScale::continuous(Real lo, Real hi) {
    if (!(lo < hi))
        raise(Errc::InvalidArgument, "continuous interval needs lo < hi");
    auto data = std::make_shared<Data>();
    data->kind = ScaleKind::Continuous;
    data->lo = lo;
    data->hi = hi;
    return TimeScale(std::move(data));
}

TimeScale TimeScale::lattice(Real origin, Real step, long count) {
    if (!(step > 0))
        raise(Errc::InvalidArgument, "lattice step must be positive");
    if (count < 1 || count > kMaxPointCount)
        raise(Errc::InvalidArgument, "lattice count out of range");
    auto data = std::make_shared<Data>();
    data->kind = ScaleKind::Lattice;
    data->origin = origin;
    data->step = step;
    data->count = count;
    data->pts.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i)
        data->pts.push_back(origin + static_cast<Real>(i) * step);
    return TimeScale(std::move(data));
}

TimeScale TimeScale::qscale(Real q, long kMin, long kMax, bool includeZero) {
    if (!(q > 0 && q < 1))
        raise(Errc::InvalidArgument, "qscale base must satisfy 0 < q < 1");
    if (kMin > kMax)
        raise(Errc::InvalidArgument, "qscale needs kMin <= kMax");
    if (std::labs(kMin) > kMaxExponentMagnitude || std::labs(kMax) > kMaxExponentMagnitude)
        raise(Errc::InvalidArgument, "qscale exponent magnitude too large");
    if (kMax - kMin + 1 > kMaxPointCount)
        raise(Errc::InvalidArgument, "qscale point count out of range");
    auto data = std::make_shared<Data>();
    data->kind = ScaleKind::QScale;
    data->q = q;
    data->kMin = kMin;
    data->kMax = kMax;
    data->includeZero = includeZero;
    if (includeZero) data->pts.push_back(0.0L);
    // descending exponent = ascending value; each value from the same
    // multiplication chain as power_int
    for (long k = kMax; k >= kMin; --k) {
        const Real v = power_int(q, k);
        if (!(v > 0) || !std::isfinite(v))
            raise(Errc::InvalidArgument, "qscale exponent range under/overflows");
        data->pts.push_back(v);
    }
    return TimeScale(std::move(data));
}

TimeScale TimeScale::finite(std::vector<Real> points) {
    if (points.empty())
        raise(Errc::InvalidArgument, "finite scale needs at least one point");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i]))
            raise(Errc::InvalidArgument, "finite scale points must be finite");
        if (i > 0 && !(points[i - 1] < points[i]))
            raise(Errc::InvalidArgument, "finite scale points must be strictly increasing");
    }
    auto data = std::make_shared<Data>();
    data->kind = ScaleKind::Finite;
    data->pts = std::move(points);
    return TimeScale(std::move(data));
}

TimeScale TimeScale::parse(std::string_view text) {
    auto toks = split_ws(text);
    if (toks.empty())
        raise(Errc::InvalidScaleSpec, "empty scale description");
    const std::string family = toks[0];

    if (family == "continuous") {
        if (toks.size() != 3)
            raise(Errc::InvalidScaleSpec, "usage: continuous LO HI");
        return continuous(parse_real_token(toks[1], "lo"), parse_real_token(toks[2], "hi"));
    }

    auto keyed = [&](const std::string& key) -> std::string {
        const std::string prefix = key + "=";
        for (std::size_t i = 1; i < toks.size(); ++i)
            if (toks[i].rfind(prefix, 0) == 0) return toks[i].substr(prefix.size());
        raise(Errc::InvalidScaleSpec, "missing " + key + "= in scale description");
    };

    if (family == "lattice") {
        return lattice(parse_real_token(keyed("origin"), "origin"),
                       parse_real_token(keyed("step"), "step"),
                       parse_long_token(keyed("count"), "count"));
    }
    if (family == "qscale") {
        bool zero = false;
        for (std::size_t i = 1; i < toks.size(); ++i)
            if (toks[i] == "zero") zero = true;
        return qscale(parse_real_token(keyed("q"), "q"), parse_long_token(keyed("kmin"), "kmin"),
                      parse_long_token(keyed("kmax"), "kmax"), zero);
    }
    if (family == "finite") {
        std::string list;
        for (std::size_t i = 1; i < toks.size(); ++i) list += toks[i];
        if (list.empty())
            raise(Errc::InvalidScaleSpec, "usage: finite P1,P2,...");
        std::vector<Real> pts;
        std::size_t pos = 0;
        while (pos <= list.size()) {
            const auto comma = list.find(',', pos);
            const auto piece = list.substr(pos, comma == std::string::npos ? std::string::npos
                                                                           : comma - pos);
            pts.push_back(parse_real_token(piece, "finite point"));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return finite(std::move(pts));
    }
    raise(Errc::InvalidScaleSpec, "unknown scale family '" + family + "'");
}

ScaleKind TimeScale::kind() const { return d().kind; }

std::size_t TimeScale::size() const {
    if (!discrete())
        raise(Errc::UnsupportedOnContinuousScale, "continuous interval has no point count");
    return d().pts.size();
}

Real TimeScale::min_value() const {
    return discrete() ? d().pts.front() : d().lo;
}

Real TimeScale::max_value() const {
    return discrete() ? d().pts.back() : d().hi;
}

ScalePoint TimeScale::min_point() const {
    if (!discrete()) return ScalePoint(ScalePoint::Rep::Value, d().lo, -1, 0);
    return make_point(0);
}

ScalePoint TimeScale::max_point() const {
    if (!discrete()) return ScalePoint(ScalePoint::Rep::Value, d().hi, -1, 0);
    return make_point(static_cast<long>(d().pts.size()) - 1);
}

ScalePoint TimeScale::make_point(long index) const {
    const Data& dd = d();
    if (dd.kind == ScaleKind::QScale) {
        const long zOff = dd.includeZero ? 1 : 0;
        if (dd.includeZero && index == 0)
            return ScalePoint(ScalePoint::Rep::Zero, 0.0L, 0, 0);
        const long k = dd.kMax - (index - zOff);
        return ScalePoint(ScalePoint::Rep::QExp, dd.pts[static_cast<std::size_t>(index)], index, k);
    }
    return ScalePoint(ScalePoint::Rep::Value, dd.pts[static_cast<std::size_t>(index)], index, 0);
}

long TimeScale::index_of(const ScalePoint& t) const {
    const Data& dd = d();
    if (dd.kind == ScaleKind::Continuous) return -1;
    switch (t.rep()) {
    case ScalePoint::Rep::Zero:
        return (dd.kind == ScaleKind::QScale && dd.includeZero && t.value() == 0.0L) ? 0 : -1;
    case ScalePoint::Rep::QExp: {
        if (dd.kind != ScaleKind::QScale) break;
        const long k = t.exponent();
        if (k < dd.kMin || k > dd.kMax) return -1;
        const long zOff = dd.includeZero ? 1 : 0;
        const long idx = zOff + (dd.kMax - k);
        return dd.pts[static_cast<std::size_t>(idx)] == t.value() ? idx : -1;
    }
    case ScalePoint::Rep::Value:
        break;
    }
    const long carried = t.index();
    if (carried >= 0 && carried < static_cast<long>(dd.pts.size()) &&
        dd.pts[static_cast<std::size_t>(carried)] == t.value())
        return carried;
    const auto it = std::lower_bound(dd.pts.begin(), dd.pts.end(), t.value());
    if (it != dd.pts.end() && *it == t.value())
        return static_cast<long>(it - dd.pts.begin());
    return -1;
}

bool TimeScale::contains(const ScalePoint& t) const {
    if (!discrete()) return contains_value(t.value());
    return index_of(t) >= 0;
}

bool TimeScale::contains_value(Real v) const {
    const Data& dd = d();
    if (dd.kind == ScaleKind::Continuous) return v >= dd.lo && v <= dd.hi;
    const auto it = std::lower_bound(dd.pts.begin(), dd.pts.end(), v);
    return it != dd.pts.end() && *it == v;
}

ScalePoint TimeScale::point_at(std::size_t index) const {
    if (!discrete())
        raise(Errc::UnsupportedOnContinuousScale, "continuous interval has no indexed points");
    if (index >= d().pts.size())
        raise(Errc::InvalidArgument, "point index out of range");
    return make_point(static_cast<long>(index));
}

ScalePoint TimeScale::point(Real value) const {
    if (!discrete()) {
        if (!contains_value(value))
            raise(Errc::PointNotInScale, format_real(value, 17) + " outside " + describe());
        return ScalePoint(ScalePoint::Rep::Value, value, -1, 0);
    }
    const auto& pts = d().pts;
    const auto it = std::lower_bound(pts.begin(), pts.end(), value);
    if (it == pts.end() || *it != value)
        raise(Errc::PointNotInScale, format_real(value, 17) + " not a point of " + describe());
    return make_point(static_cast<long>(it - pts.begin()));
}

ScalePoint TimeScale::q_point(long k) const {
    const Data& dd = d();
    if (dd.kind != ScaleKind::QScale)
        raise(Errc::InvalidArgument, "q_point requires a q-scale");
    if (k < dd.kMin || k > dd.kMax)
        raise(Errc::PointNotInScale, "exponent " + std::to_string(k) + " outside qscale range");
    const long zOff = dd.includeZero ? 1 : 0;
    return make_point(zOff + (dd.kMax - k));
}

ScalePoint TimeScale::zero_point() const {
    const Data& dd = d();
    if (dd.kind != ScaleKind::QScale || !dd.includeZero)
        raise(Errc::PointNotInScale, "scale does not contain the accumulation point 0");
    return make_point(0);
}

std::vector<ScalePoint> TimeScale::all_points() const {
    if (!discrete())
        raise(Errc::UnsupportedOnContinuousScale, "cannot enumerate a continuous interval");
    std::vector<ScalePoint> out;
    out.reserve(d().pts.size());
    for (std::size_t i = 0; i < d().pts.size(); ++i) out.push_back(make_point(static_cast<long>(i)));
    return out;
}

std::vector<ScalePoint> TimeScale::points_in(const TsInterval& iv) const {
    if (!discrete())
        raise(Errc::UnsupportedOnContinuousScale, "cannot enumerate a continuous interval");
    const auto& pts = d().pts;
    std::vector<ScalePoint> out;
    auto lo = std::lower_bound(pts.begin(), pts.end(), iv.lower().value());
    for (auto it = lo; it != pts.end() && *it <= iv.upper().value(); ++it) {
        if (!iv.contains_value(*it)) continue;
        out.push_back(make_point(static_cast<long>(it - pts.begin())));
    }
    return out;
}

ScalePoint TimeScale::sigma(const ScalePoint& t) const {
    if (!contains(t))
        raise(Errc::PointNotInScale, "sigma: point not in scale");
    if (!discrete()) return t;
    if (t.rep() == ScalePoint::Rep::Zero) return t; // accumulation point is right-dense
    const long idx = index_of(t);
    if (idx == static_cast<long>(d().pts.size()) - 1) return t;
    return make_point(idx + 1);
}

ScalePoint TimeScale::rho(const ScalePoint& t) const {
    if (!contains(t))
        raise(Errc::PointNotInScale, "rho: point not in scale");
    if (!discrete()) return t;
    const long idx = index_of(t);
    if (idx == 0) return t;
    return make_point(idx - 1);
}

Real TimeScale::mu(const ScalePoint& t) const { return sigma(t).value() - t.value(); }

Real TimeScale::nu(const ScalePoint& t) const { return t.value() - rho(t).value(); }

PointClass TimeScale::classify(const ScalePoint& t) const {
    if (!contains(t))
        raise(Errc::PointNotInScale, "classify: point not in scale");
    PointClass c;
    if (!discrete()) {
        if (t.value() < d().hi) c.rightDense = true;
        if (t.value() > d().lo) c.leftDense = true;
        return c;
    }
    const long idx = index_of(t);
    const long last = static_cast<long>(d().pts.size()) - 1;
    if (idx < last) {
        if (t.rep() == ScalePoint::Rep::Zero)
            c.rightDense = true; // q^k accumulates at 0 from the right
        else
            c.rightScattered = true;
    }
    if (idx > 0) c.leftScattered = true;
    return c;
}

TimeScale TimeScale::dual() const {
    const Data& dd = d();
    if (dd.kind == ScaleKind::Continuous) return continuous(-dd.hi, -dd.lo);

    std::vector<Real> negated(dd.pts.size());
    for (std::size_t i = 0; i < dd.pts.size(); ++i)
        negated[i] = -dd.pts[dd.pts.size() - 1 - i];

    if (dd.kind == ScaleKind::Lattice) {
        auto data = std::make_shared<Data>();
        data->kind = ScaleKind::Lattice;
        data->origin = negated.front();
        data->step = dd.step;
        data->count = dd.count;
        data->pts = std::move(negated);
        return TimeScale(std::move(data));
    }
    // reflected q-scales have negative points, which only the finite family
    // can carry; values stay exact negations either way
    return finite(std::move(negated));
}

Real TimeScale::q() const {
    if (kind() != ScaleKind::QScale) raise(Errc::InvalidArgument, "not a q-scale");
    return d().q;
}
long TimeScale::k_min() const {
    if (kind() != ScaleKind::QScale) raise(Errc::InvalidArgument, "not a q-scale");
    return d().kMin;
}
long TimeScale::k_max() const {
    if (kind() != ScaleKind::QScale) raise(Errc::InvalidArgument, "not a q-scale");
    return d().kMax;
}
bool TimeScale::include_zero() const {
    if (kind() != ScaleKind::QScale) raise(Errc::InvalidArgument, "not a q-scale");
    return d().includeZero;
}
Real TimeScale::lattice_origin() const {
    if (kind() != ScaleKind::Lattice) raise(Errc::InvalidArgument, "not a lattice");
    return d().origin;
}
Real TimeScale::lattice_step() const {
    if (kind() != ScaleKind::Lattice) raise(Errc::InvalidArgument, "not a lattice");
    return d().step;
}
Real TimeScale::continuous_lo() const {
    if (kind() != ScaleKind::Continuous) raise(Errc::InvalidArgument, "not continuous");
    return d().lo;
}
Real TimeScale::continuous_hi() const {
    if (kind() != ScaleKind::Continuous) raise(Errc::InvalidArgument, "not continuous");
    return d().hi;
}

bool TimeScale::equivalent(const TimeScale& other) const {
    if (same_as(other)) return true;
    if (!discrete() || !other.discrete())
        return kind() == other.kind() && d().lo == other.d().lo && d().hi == other.d().hi;
    const bool zeroHere = kind() == ScaleKind::QScale && d().includeZero;
    const bool zeroThere = other.kind() == ScaleKind::QScale && other.d().includeZero;
    return zeroHere == zeroThere && d().pts == other.d().pts;
}

long TimeScale::exponent_at(std::size_t index) const {
    const Data& dd = d();
    if (dd.kind != ScaleKind::QScale) raise(Errc::InvalidArgument, "not a q-scale");
    const long zOff = dd.includeZero ? 1 : 0;
    if (dd.includeZero && index == 0)
        raise(Errc::InvalidArgument, "index 0 is the accumulation point, not a power of q");
    return dd.kMax - (static_cast<long>(index) - zOff);
}

std::string TimeScale::describe() const {
    const Data& dd = d();
    switch (dd.kind) {
    case ScaleKind::Continuous:
        return "continuous " + format_real(dd.lo, 21) + " " + format_real(dd.hi, 21);
    case ScaleKind::Lattice:
        return "lattice origin=" + format_real(dd.origin, 21) + " step=" + format_real(dd.step, 21) +
               " count=" + std::to_string(dd.count);
    case ScaleKind::QScale:
        return "qscale q=" + format_real(dd.q, 21) + " kmin=" + std::to_string(dd.kMin) +
               " kmax=" + std::to_string(dd.kMax) + (dd.includeZero ? " zero" : "");
    case ScaleKind::Finite: {
        std::string s = "finite ";
        for (std::size_t i = 0; i < dd.pts.size(); ++i) {
            if (i) s += ",";
            s += format_real(dd.pts[i], 21);
        }
        return s;
    }
    }
    return "?";
}

} // namespace tsc
