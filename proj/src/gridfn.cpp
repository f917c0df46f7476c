#include "tsc/gridfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>

namespace tsc {

namespace {

Real parse_csv_real(const std::string& token, std::size_t row) {
    char* end = nullptr;
    errno = 0;
    const Real v = std::strtold(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0' || errno == ERANGE)
        raise(Errc::CsvFormat, "row " + std::to_string(row) + ": bad number '" + token + "'");
    return v;
}

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        cells.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    for (auto& c : cells) {
        while (!c.empty() && (c.front() == ' ' || c.front() == '\t')) c.erase(c.begin());
        while (!c.empty() && (c.back() == ' ' || c.back() == '\t')) c.pop_back();
    }
    return cells;
}

TsInterval make_interval(const ScalePoint& lo, const ScalePoint& hi, bool loOpen, bool hiOpen) {
    if (loOpen)
        return hiOpen ? TsInterval::open(lo, hi) : TsInterval::open_closed(lo, hi);
    return hiOpen ? TsInterval::closed_open(lo, hi) : TsInterval::closed(lo, hi);
}

} // namespace

const char* mono_kind_name(MonoKind kind) {
    switch (kind) {
    case MonoKind::StrictlyIncreasing: return "strictly-increasing";
    case MonoKind::StrictlyDecreasing: return "strictly-decreasing";
    case MonoKind::NonDecreasing: return "non-decreasing";
    case MonoKind::NonIncreasing: return "non-increasing";
    case MonoKind::Neither: return "neither";
    case MonoKind::Vacuous: return "vacuous";
    }
    return "?";
}

GridFunction GridFunction::table(TimeScale scale, TsInterval domain, std::vector<Real> values) {
    if (!scale.discrete())
        raise(Errc::UnsupportedOnContinuousScale, "table source needs a discrete scale");
    GridFunction f;
    f.scale_ = std::move(scale);
    f.domain_ = domain;
    f.table_ = true;
    f.pts_ = f.scale_.points_in(domain);
    if (values.size() != f.pts_.size())
        raise(Errc::InvalidArgument,
              "table has " + std::to_string(values.size()) + " values for " +
                  std::to_string(f.pts_.size()) + " domain points");
    f.values_ = std::move(values);
    return f;
}

GridFunction GridFunction::sample(TimeScale scale, TsInterval domain, const Evaluator& fn) {
    if (!scale.discrete())
        raise(Errc::UnsupportedOnContinuousScale, "sampling needs a discrete scale");
    auto pts = scale.points_in(domain);
    std::vector<Real> values;
    values.reserve(pts.size());
    for (const auto& p : pts) values.push_back(fn(p.value()));
    return table(std::move(scale), domain, std::move(values));
}

GridFunction GridFunction::analytic(TimeScale scale, TsInterval domain, Evaluator fn,
                                    Evaluator derivative) {
    if (!fn) raise(Errc::InvalidArgument, "analytic source needs an evaluator");
    GridFunction f;
    f.scale_ = std::move(scale);
    f.domain_ = domain;
    f.table_ = false;
    f.eval_ = std::move(fn);
    f.deriv_ = std::move(derivative);
    if (f.scale_.discrete()) f.pts_ = f.scale_.points_in(domain);
    return f;
}

const std::vector<ScalePoint>& GridFunction::domain_points() const {
    if (!scale_.discrete())
        raise(Errc::UnsupportedOnContinuousScale, "continuous domain has no point list");
    return pts_;
}

const std::vector<Real>& GridFunction::table_values() const {
    if (!table_) raise(Errc::InvalidArgument, "not a table source");
    return values_;
}

Real GridFunction::value_at(std::size_t pos) const {
    return table_ ? values_[pos] : eval_(pts_[pos].value());
}

Real GridFunction::operator()(const ScalePoint& t) const {
    if (scale_.discrete()) {
        const long idx = scale_.index_of(t);
        if (idx < 0) raise(Errc::PointNotInScale, "evaluation point not on the scale");
        if (pts_.empty() || idx < pts_.front().index() || idx > pts_.back().index())
            raise(Errc::PointOutsideDomain, "evaluation point outside the function domain");
        return value_at(static_cast<std::size_t>(idx - pts_.front().index()));
    }
    return eval_value(t.value());
}

Real GridFunction::eval_value(Real x) const {
    if (!domain_.contains_value(x))
        raise(Errc::PointOutsideDomain, "coordinate outside the function domain");
    if (table_) return (*this)(scale_.point(x));
    return eval_(x);
}

GridFunction GridFunction::derivative(DerivKind kind) const {
    return kind == DerivKind::Delta ? delta_derivative() : nabla_derivative();
}

GridFunction GridFunction::delta_derivative() const {
    if (!scale_.discrete()) {
        if (!deriv_)
            raise(Errc::DensePointWithoutAnalyticDerivative,
                  "dense points need an analytic derivative evaluator");
        return analytic(scale_, domain_, deriv_, {});
    }
    if (pts_.size() < 2)
        raise(Errc::EmptyDerivativeDomain, "need at least two domain points");
    std::vector<Real> dv(pts_.size() - 1);
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
        if (pts_[i].rep() == ScalePoint::Rep::Zero) {
            // right-dense accumulation point: no forward quotient exists
            if (!deriv_)
                raise(Errc::DensePointWithoutAnalyticDerivative,
                      "delta quotient undefined at the accumulation point 0");
            dv[i] = deriv_(0.0L);
            continue;
        }
        const Real gap = pts_[i + 1].value() - pts_[i].value();
        dv[i] = (value_at(i + 1) - value_at(i)) / gap;
    }
    return table(scale_, TsInterval::closed(pts_.front(), pts_[pts_.size() - 2]), std::move(dv));
}

GridFunction GridFunction::nabla_derivative() const {
    if (!scale_.discrete()) {
        if (!deriv_)
            raise(Errc::DensePointWithoutAnalyticDerivative,
                  "dense points need an analytic derivative evaluator");
        return analytic(scale_, domain_, deriv_, {});
    }
    if (pts_.size() < 2)
        raise(Errc::EmptyDerivativeDomain, "need at least two domain points");
    std::vector<Real> dv(pts_.size() - 1);
    for (std::size_t i = 1; i < pts_.size(); ++i) {
        const Real gap = pts_[i].value() - pts_[i - 1].value();
        dv[i - 1] = (value_at(i) - value_at(i - 1)) / gap;
    }
    return table(scale_, TsInterval::closed(pts_[1], pts_.back()), std::move(dv));
}

GridFunction GridFunction::iterate_derivative(int k, DerivKind kind) const {
    if (k < 0) raise(Errc::InvalidArgument, "derivative order must be >= 0");
    GridFunction f = *this;
    for (int i = 0; i < k; ++i) {
        if (f.scale_.discrete() && f.pts_.size() < 2)
            raise(Errc::DomainExhausted, "domain exhausted after " + std::to_string(i) + " of " +
                                             std::to_string(k) + " derivative steps");
        f = f.derivative(kind);
    }
    return f;
}

MonotonicityVerdict classify_value_sequence(const std::vector<ScalePoint>& pts,
                                            const std::vector<Real>& vals, Real tol) {
    MonotonicityVerdict verdict;
    verdict.tolerance = tol;
    if (pts.size() != vals.size())
        raise(Errc::InvalidArgument, "points and values differ in length");
    if (pts.size() < 2) {
        verdict.kind = MonoKind::Vacuous;
        return verdict;
    }
    bool strictInc = true, strictDec = true, nonDec = true, nonInc = true;
    long firstUp = -1, firstDown = -1;
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        const Real d = vals[i + 1] - vals[i];
        if (!(d > tol)) strictInc = false;
        if (!(d < -tol)) strictDec = false;
        if (d < -tol) {
            nonDec = false;
            if (firstUp < 0) firstUp = static_cast<long>(i);
        }
        if (d > tol) {
            nonInc = false;
            if (firstDown < 0) firstDown = static_cast<long>(i);
        }
    }
    if (strictInc)
        verdict.kind = MonoKind::StrictlyIncreasing;
    else if (strictDec)
        verdict.kind = MonoKind::StrictlyDecreasing;
    else if (nonDec)
        verdict.kind = MonoKind::NonDecreasing;
    else if (nonInc)
        verdict.kind = MonoKind::NonIncreasing;
    else {
        verdict.kind = MonoKind::Neither;
        const long w = (firstUp >= 0 && (firstDown < 0 || firstUp < firstDown)) ? firstUp : firstDown;
        const auto wi = static_cast<std::size_t>(w);
        verdict.witness = MonoWitness{pts[wi], pts[wi + 1], vals[wi], vals[wi + 1]};
    }
    return verdict;
}

MonotonicityVerdict GridFunction::classify_monotonicity(const TsInterval& iv, Real tol) const {
    if (!scale_.discrete())
        raise(Errc::UnsupportedOnContinuousScale,
              "monotonicity classification needs a discrete scale");
    const auto pts = scale_.points_in(iv);
    std::vector<Real> vals;
    vals.reserve(pts.size());
    for (const auto& p : pts) vals.push_back((*this)(p));
    return classify_value_sequence(pts, vals, tol);
}

MonotonicityVerdict GridFunction::classify_monotonicity(Real tol) const {
    return classify_monotonicity(domain_, tol);
}

GridFunction GridFunction::restricted(const TsInterval& sub) const {
    if (sub.lower().value() < domain_.lower().value() ||
        sub.upper().value() > domain_.upper().value())
        raise(Errc::PointOutsideDomain, "sub-interval reaches outside the domain");
    if (!scale_.discrete() || !table_) {
        GridFunction f = *this;
        f.domain_ = sub;
        if (scale_.discrete()) f.pts_ = scale_.points_in(sub);
        return f;
    }
    const auto pts = scale_.points_in(sub);
    std::vector<Real> vals;
    vals.reserve(pts.size());
    for (const auto& p : pts) vals.push_back((*this)(p));
    return table(scale_, sub, std::move(vals));
}

GridFunction GridFunction::dual_function() const {
    TimeScale dualScale = scale_.dual();
    if (!dualScale.discrete()) {
        TsInterval dualDomain = make_interval(dualScale.point(-domain_.upper().value()),
                                              dualScale.point(-domain_.lower().value()),
                                              domain_.upper_open(), domain_.lower_open());
        Evaluator fn = [e = eval_](Real s) { return e(-s); };
        Evaluator dfn;
        if (deriv_) dfn = [d = deriv_](Real s) { return -d(-s); };
        return analytic(std::move(dualScale), dualDomain, std::move(fn), std::move(dfn));
    }

    TsInterval dualDomain = make_interval(dualScale.point(-domain_.upper().value()),
                                          dualScale.point(-domain_.lower().value()),
                                          domain_.upper_open(), domain_.lower_open());
    if (table_) {
        std::vector<Real> reversed(values_.rbegin(), values_.rend());
        return table(std::move(dualScale), dualDomain, std::move(reversed));
    }
    Evaluator fn = [e = eval_](Real s) { return e(-s); };
    Evaluator dfn;
    if (deriv_) dfn = [d = deriv_](Real s) { return -d(-s); };
    return analytic(std::move(dualScale), dualDomain, std::move(fn), std::move(dfn));
}

GridFunction delta_integrate(const GridFunction& rate, const ScalePoint& anchor, Real f0) {
    const TimeScale& scale = rate.scale();
    if (!scale.discrete())
        raise(Errc::UnsupportedOnContinuousScale, "cumulative sums need a discrete scale");
    const auto& pts = rate.domain_points();
    if (pts.empty()) raise(Errc::InvalidArgument, "rate function has an empty domain");
    const long anchorIdx = scale.index_of(anchor);
    if (anchorIdx < 0) raise(Errc::PointNotInScale, "anchor not on the scale");
    const long first = pts.front().index();
    const long last = pts.back().index();
    if (anchorIdx < first || anchorIdx > last)
        raise(Errc::PointOutsideDomain, "anchor outside the rate domain");

    std::vector<Real> values;
    values.reserve(static_cast<std::size_t>(last - anchorIdx) + 2);
    values.push_back(f0);
    ScalePoint endPoint = scale.point_at(static_cast<std::size_t>(anchorIdx));
    for (long idx = anchorIdx; idx <= last; ++idx) {
        const ScalePoint t = scale.point_at(static_cast<std::size_t>(idx));
        const ScalePoint next = scale.sigma(t);
        if (next.value() == t.value())
            raise(Errc::InvalidArgument, "cannot advance past " + format_real(t.value(), 17) +
                                             " (right-dense or scale maximum)");
        values.push_back(values.back() + scale.mu(t) * rate(t));
        endPoint = next;
    }
    return GridFunction::table(
        scale, TsInterval::closed(scale.point_at(static_cast<std::size_t>(anchorIdx)), endPoint),
        std::move(values));
}

MvtWitnesses cauchy_mvt_witnesses(const GridFunction& F, const GridFunction& G,
                                  const ScalePoint& a, const ScalePoint& x) {
    if (!F.scale().equivalent(G.scale()))
        raise(Errc::InvalidArgument, "functions must share one scale");
    const TimeScale& scale = F.scale();
    if (!scale.discrete())
        raise(Errc::UnsupportedOnContinuousScale, "witness scan needs a discrete scale");
    if (!(a.value() < x.value()))
        raise(Errc::DegenerateInterval, "need a < x");

    const auto candidates = scale.points_in(TsInterval::closed_open(a, x));
    if (candidates.empty()) raise(Errc::DegenerateInterval, "no scan points in [a, x[");
    for (const auto& c : candidates)
        if (c.rep() == ScalePoint::Rep::Zero)
            raise(Errc::DensePointWithoutAnalyticDerivative,
                  "delta quotient undefined at the accumulation point 0");

    const GridFunction dF = F.delta_derivative();
    const GridFunction dG = G.delta_derivative();

    bool anyPos = false, anyNeg = false;
    std::vector<Real> ratios;
    ratios.reserve(candidates.size());
    for (const auto& c : candidates) {
        const Real g = dG(c);
        if (g > 0)
            anyPos = true;
        else if (g < 0)
            anyNeg = true;
        else
            raise(Errc::SignConditionViolated,
                  "denominator derivative vanishes at " + format_real(c.value(), 17));
        ratios.push_back(dF(c) / g);
    }
    if (anyPos && anyNeg)
        raise(Errc::SignConditionViolated, "denominator derivative changes sign on [a, x[");

    std::size_t minAt = 0, maxAt = 0;
    for (std::size_t i = 1; i < ratios.size(); ++i) {
        if (ratios[i] < ratios[minAt]) minAt = i;
        if (ratios[i] > ratios[maxAt]) maxAt = i;
    }
    const Real middle = (F(x) - F(a)) / (G(x) - G(a));
    return MvtWitnesses{candidates[minAt], candidates[maxAt], ratios[minAt], middle, ratios[maxAt]};
}

CsvFunctions read_csv_functions(std::istream& in, const TimeScale& scale) {
    if (!scale.discrete())
        raise(Errc::UnsupportedOnContinuousScale, "CSV tables need a discrete scale");
    std::string line;
    if (!std::getline(in, line)) raise(Errc::CsvFormat, "empty input");
    const auto header = split_csv_line(line);
    bool hasG = false;
    if (header.size() == 2 && header[0] == "t" && header[1] == "f")
        hasG = false;
    else if (header.size() == 3 && header[0] == "t" && header[1] == "f" && header[2] == "g")
        hasG = true;
    else
        raise(Errc::CsvFormat, "header must be 't,f' or 't,f,g'");

    std::vector<Real> fv, gv;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            raise(Errc::CsvFormat, "row " + std::to_string(row + 1) + ": expected " +
                                       std::to_string(header.size()) + " columns");
        if (row >= scale.size()) raise(Errc::CsvFormat, "more rows than scale points");
        const Real t = parse_csv_real(cells[0], row + 1);
        const ScalePoint expected = scale.point_at(row);
        if (scale.kind() == ScaleKind::QScale) {
            // lattice position fixes the exponent; the printed value only has
            // to identify it
            const Real ref = expected.value();
            const Real band = ref == 0.0L ? 0.0L : std::fabs(ref) * 1e-9L;
            if (std::fabs(t - ref) > band)
                raise(Errc::CsvFormat, "row " + std::to_string(row + 1) + ": point " +
                                           format_real(t, 17) + " does not match lattice point " +
                                           format_real(ref, 17));
        } else if (t != expected.value()) {
            raise(Errc::CsvFormat, "row " + std::to_string(row + 1) + ": point " +
                                       format_real(t, 17) + " does not match scale point " +
                                       format_real(expected.value(), 17));
        }
        fv.push_back(parse_csv_real(cells[1], row + 1));
        if (hasG) gv.push_back(parse_csv_real(cells[2], row + 1));
        ++row;
    }
    if (row != scale.size())
        raise(Errc::CsvFormat, "expected one row per scale point (" +
                                   std::to_string(scale.size()) + "), got " + std::to_string(row));

    const TsInterval whole = TsInterval::closed(scale.min_point(), scale.max_point());
    CsvFunctions out{GridFunction::table(scale, whole, std::move(fv)), std::nullopt};
    if (hasG) out.g = GridFunction::table(scale, whole, std::move(gv));
    return out;
}

CsvFunctions read_csv_file(const std::string& path, const TimeScale& scale) {
    std::ifstream in(path);
    if (!in) raise(Errc::CsvFormat, "cannot open '" + path + "'");
    return read_csv_functions(in, scale);
}

} // namespace tsc
