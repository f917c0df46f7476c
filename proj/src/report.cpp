#include "tsc/report.hpp"

#include <algorithm>
#include <sstream>

namespace tsc::report {

namespace {

std::string rs(Real v, int digits) { return format_real(v, digits); }

std::string cell_text(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
}

void render_rows_table(std::ostringstream& out, const Json& rows) {
    if (rows.empty()) return;
    std::vector<std::string> columns;
    for (const auto& [key, value] : rows.front().items()) {
        (void)value;
        columns.push_back(key);
    }
    std::vector<std::size_t> widths;
    for (const auto& c : columns) widths.push_back(c.size());
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : rows) {
        std::vector<std::string> line;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            line.push_back(row.contains(columns[i]) ? cell_text(row[columns[i]]) : "");
            widths[i] = std::max(widths[i], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    auto pad = [](const std::string& s, std::size_t w) {
        return std::string(w - s.size(), ' ') + s;
    };
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "  " : "") << pad(columns[i], widths[i]);
    out << "\n";
    for (const auto& line : cells) {
        for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "  " : "") << pad(line[i], widths[i]);
        out << "\n";
    }
}

void render_scalars_table(std::ostringstream& out, const Json& doc, const std::string& prefix) {
    for (const auto& [key, value] : doc.items()) {
        if (key == "rows" || key == "csv_columns" || key == "records" || key == "stages") continue;
        if (value.is_object()) {
            render_scalars_table(out, value, prefix + key + ".");
        } else if (value.is_array()) {
            continue;
        } else {
            out << prefix << key << ": " << cell_text(value) << "\n";
        }
    }
}

} // namespace

Format parse_format(const std::string& name) {
    if (name == "table") return Format::Table;
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    raise(Errc::InvalidArgument, "unknown format '" + name + "' (table|csv|json)");
}

Json scale_info_json(const TimeScale& ts, int digits) {
    Json doc;
    doc["family"] = scale_kind_name(ts.kind());
    doc["description"] = ts.describe();
    if (ts.kind() == ScaleKind::QScale) {
        doc["q"] = rs(ts.q(), digits);
        doc["kmin"] = ts.k_min();
        doc["kmax"] = ts.k_max();
        doc["includes_zero"] = ts.include_zero();
    }
    if (ts.kind() == ScaleKind::Lattice) {
        doc["origin"] = rs(ts.lattice_origin(), digits);
        doc["step"] = rs(ts.lattice_step(), digits);
    }
    if (!ts.discrete()) {
        doc["lo"] = rs(ts.continuous_lo(), digits);
        doc["hi"] = rs(ts.continuous_hi(), digits);
        return doc;
    }
    doc["points"] = ts.size();
    doc["min"] = rs(ts.min_value(), digits);
    doc["max"] = rs(ts.max_value(), digits);
    if (ts.size() <= 64) {
        Json rows = Json::array();
        for (const auto& t : ts.all_points()) {
            const auto cls = ts.classify(t);
            Json row;
            row["t"] = rs(t.value(), digits);
            row["sigma"] = rs(ts.sigma(t).value(), digits);
            row["rho"] = rs(ts.rho(t).value(), digits);
            row["mu"] = rs(ts.mu(t), digits);
            row["nu"] = rs(ts.nu(t), digits);
            row["right"] = cls.rightScattered ? "scattered" : (cls.rightDense ? "dense" : "max");
            row["left"] = cls.leftScattered ? "scattered" : (cls.leftDense ? "dense" : "min");
            rows.push_back(std::move(row));
        }
        doc["rows"] = std::move(rows);
    }
    return doc;
}

Json qexp_json(const QContext& ctx, Real x, const QSeriesResult& result, int digits) {
    Json doc;
    doc["q"] = rs(ctx.q, digits);
    doc["x"] = rs(x, digits);
    doc["precision"] = ctx.precision;
    doc["tail_tol"] = rs(ctx.tailTol, 6);
    doc["value"] = rs(result.value, digits);
    doc["terms_used"] = result.termsUsed;
    doc["tail_bound"] = rs(result.tailBound, 6);
    return doc;
}

Json bound_report_json(const BoundProblem& problem, const BoundReport& report, int digits) {
    Json doc;
    doc["q"] = rs(problem.ctx.q, digits);
    doc["a_exp"] = problem.aExp;
    doc["b_exp"] = problem.bExp;
    doc["n"] = problem.n;
    doc["tol"] = rs(report.tol, 6);
    doc["terms_used_max"] = report.maxTermsUsed;
    doc["all_passed"] = report.allPassed;
    doc["endpoint_equality_lower"] = rs(report.endpointEqualityLower, 6);
    doc["endpoint_equality_upper"] = rs(report.endpointEqualityUpper, 6);
    doc["csv_columns"] =
        Json::array({"x", "lower", "exact", "upper", "lower_margin", "upper_margin"});
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        Json r;
        r["x"] = rs(row.x, digits);
        r["lower"] = rs(row.lower, digits);
        r["exact"] = rs(row.exact, digits);
        r["upper"] = rs(row.upper, digits);
        r["lower_margin"] = rs(row.lowerMargin, 6);
        r["upper_margin"] = rs(row.upperMargin, 6);
        r["on_lattice"] = row.onLattice;
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

Json chain_report_json(const BoundProblem& problem, const ChainReport& report, int digits) {
    Json doc;
    doc["q"] = rs(problem.ctx.q, digits);
    doc["a_exp"] = problem.aExp;
    doc["b_exp"] = problem.bExp;
    doc["n"] = report.n;
    doc["tol"] = rs(report.tol, 6);
    doc["all_passed"] = report.allPassed;
    doc["vanish_ok"] = report.vanishOk;
    doc["top_constant_exact"] = report.topConstantExact;
    doc["top_constant_max_dev"] = rs(report.topConstantMaxDev, 6);
    doc["top_ratio_max_dev"] = rs(report.topRatioMaxDev, 6);
    doc["ratios_increasing"] = report.ratiosIncreasing;
    doc["endpoint_sandwich_ok"] = report.endpointSandwichOk;
    Json rows = Json::array();
    for (const auto& stage : report.stages) {
        Json r;
        r["k"] = stage.k;
        r["f_at_a"] = rs(stage.fAtA, 6);
        r["g_at_a"] = rs(stage.gAtA, 6);
        r["ratio_verdict"] = mono_kind_name(stage.ratioVerdict.kind);
        r["closed_form_gap"] = rs(stage.closedFormGap, 6);
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    (void)digits;
    return doc;
}

Json suite_report_json(const SuiteReport& report, int digits) {
    Json doc;
    doc["mode"] = report.nabla ? "nabla" : "delta";
    doc["trials"] = report.trials;
    doc["seed"] = report.seed;
    doc["tol"] = rs(report.tol, 6);
    Json counts;
    counts["satisfied"] = report.satisfied;
    counts["violations"] = report.violations;
    counts["premise_failures"] = report.premiseFailures;
    counts["vacuous"] = report.vacuous;
    counts["mvt_violations"] = report.mvtViolations;
    counts["duality_mismatches"] = report.dualityMismatches;
    doc["counts"] = std::move(counts);
    Json records = Json::array();
    for (const auto& rec : report.records) {
        Json r;
        r["index"] = rec.index;
        r["scale"] = rec.scaleText;
        r["strict"] = rec.profile.strict;
        r["increasing"] = rec.profile.increasing;
        r["g_positive"] = rec.profile.gPositive;
        r["end"] = rec.end == EndSide::Left ? "left" : "right";
        r["outcome"] = rule_outcome_name(rec.outcome);
        r["mvt_holds"] = rec.mvtHolds;
        if (report.nabla) {
            r["dual_agrees"] = rec.dualAgrees;
            r["max_dual_gap"] = rs(rec.maxDualGap, 6);
        }
        if (rec.witness) {
            Json w;
            w["at"] = rs(rec.witness->at.value(), digits);
            w["next"] = rs(rec.witness->next.value(), digits);
            w["value"] = rs(rec.witness->value, digits);
            w["next_value"] = rs(rec.witness->nextValue, digits);
            r["witness"] = std::move(w);
        }
        records.push_back(std::move(r));
    }
    doc["records"] = std::move(records);
    return doc;
}

Json mvt_json(const MvtWitnesses& witnesses, bool sandwichOk, int digits) {
    Json doc;
    doc["c1"] = rs(witnesses.minRatioPoint.value(), digits);
    doc["c2"] = rs(witnesses.maxRatioPoint.value(), digits);
    doc["lower_ratio"] = rs(witnesses.lowerRatio, digits);
    doc["middle_ratio"] = rs(witnesses.middleRatio, digits);
    doc["upper_ratio"] = rs(witnesses.upperRatio, digits);
    doc["sandwich_ok"] = sandwichOk;
    return doc;
}

std::string render(const Json& doc, Format format) {
    if (format == Format::Json) {
        Json clean = doc;
        clean.erase("csv_columns");
        return clean.dump(2) + "\n";
    }
    std::ostringstream out;
    if (format == Format::Csv) {
        if (doc.contains("rows")) {
            std::vector<std::string> columns;
            if (doc.contains("csv_columns"))
                for (const auto& c : doc["csv_columns"]) columns.push_back(c.get<std::string>());
            else if (!doc["rows"].empty())
                for (const auto& [key, value] : doc["rows"].front().items()) {
                    (void)value;
                    columns.push_back(key);
                }
            for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
            out << "\n";
            for (const auto& row : doc["rows"]) {
                for (std::size_t i = 0; i < columns.size(); ++i)
                    out << (i ? "," : "") << (row.contains(columns[i]) ? cell_text(row[columns[i]]) : "");
                out << "\n";
            }
        } else {
            for (const auto& [key, value] : doc.items()) {
                if (value.is_object() || value.is_array()) continue;
                out << key << "," << cell_text(value) << "\n";
            }
        }
        return out.str();
    }
    render_scalars_table(out, doc, "");
    if (doc.contains("rows")) {
        out << "\n";
        render_rows_table(out, doc["rows"]);
    }
    if (doc.contains("stages")) {
        out << "\n";
        render_rows_table(out, doc["stages"]);
    }
    if (doc.contains("records") && !doc["records"].empty()) {
        out << "\n";
        Json flat = Json::array();
        for (const auto& rec : doc["records"]) {
            Json r;
            for (const auto& [key, value] : rec.items())
                if (!value.is_object() && !value.is_array()) r[key] = value;
            flat.push_back(std::move(r));
        }
        render_rows_table(out, flat);
    }
    return out.str();
}

} // namespace tsc::report
