#include "tsc/cli.hpp"

#include "tsc/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace tsc::cli {

namespace {

using report::Format;
using report::Json;

Real env_real(const char* name, Real fallback) {
    const char* text = std::getenv(name);
    if (!text || !*text) return fallback;
    char* end = nullptr;
    const Real v = std::strtold(text, &end);
    if (end == text || *end != '\0')
        raise(Errc::InvalidArgument, std::string(name) + " is not a number: '" + text + "'");
    return v;
}

int env_int(const char* name, int fallback) {
    const char* text = std::getenv(name);
    if (!text || !*text) return fallback;
    char* end = nullptr;
    const long v = std::strtol(text, &end, 10);
    if (end == text || *end != '\0')
        raise(Errc::InvalidArgument, std::string(name) + " is not an integer: '" + text + "'");
    return static_cast<int>(v);
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += " ";
        out += parts[i];
    }
    return out;
}

ScaleFamilySpec parse_family_compact(const std::string& text) {
    // finite:4-50 | lattice:4-50 | qscale@0.3:4-12
    ScaleFamilySpec spec;
    const auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    const auto at = head.find('@');
    std::string kind = head.substr(0, at);
    if (kind == "finite")
        spec.kind = ScaleKind::Finite;
    else if (kind == "lattice")
        spec.kind = ScaleKind::Lattice;
    else if (kind == "qscale")
        spec.kind = ScaleKind::QScale;
    else
        raise(Errc::InvalidArgument, "unknown scale family '" + kind + "'");
    if (at != std::string::npos) {
        char* end = nullptr;
        spec.q = std::strtold(head.c_str() + at + 1, &end);
        if (end == head.c_str() + at + 1)
            raise(Errc::InvalidArgument, "bad q in family '" + text + "'");
    }
    if (colon != std::string::npos) {
        const std::string range = text.substr(colon + 1);
        const auto dash = range.find('-');
        if (dash == std::string::npos)
            raise(Errc::InvalidArgument, "family size range must look like 4-50");
        spec.minPoints = std::strtol(range.substr(0, dash).c_str(), nullptr, 10);
        spec.maxPoints = std::strtol(range.substr(dash + 1).c_str(), nullptr, 10);
        if (spec.minPoints < 4 || spec.maxPoints < spec.minPoints)
            raise(Errc::InvalidArgument, "family size range must satisfy 4 <= min <= max");
    }
    return spec;
}

SuiteConfig parse_suite_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::InvalidArgument, "cannot open config '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    SuiteConfig cfg;

    const auto firstChar = text.find_first_not_of(" \t\r\n");
    if (firstChar != std::string::npos && text[firstChar] == '{') {
        Json doc;
        try {
            doc = Json::parse(text);
        } catch (const std::exception& e) {
            raise(Errc::InvalidArgument, std::string("config JSON: ") + e.what());
        }
        if (doc.contains("trials")) cfg.trials = doc["trials"].get<long>();
        if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("tol")) cfg.tol = static_cast<Real>(doc["tol"].get<double>());
        if (doc.contains("nabla")) cfg.nabla = doc["nabla"].get<bool>();
        if (doc.contains("non_strict")) cfg.nonStrictOnly = doc["non_strict"].get<bool>();
        if (doc.contains("verbose")) cfg.verbose = doc["verbose"].get<bool>();
        if (doc.contains("scales")) {
            for (const auto& fam : doc["scales"]) {
                ScaleFamilySpec spec;
                const std::string kind = fam.at("kind").get<std::string>();
                if (kind == "finite")
                    spec.kind = ScaleKind::Finite;
                else if (kind == "lattice")
                    spec.kind = ScaleKind::Lattice;
                else if (kind == "qscale")
                    spec.kind = ScaleKind::QScale;
                else
                    raise(Errc::InvalidArgument, "unknown scale family '" + kind + "'");
                if (fam.contains("q")) spec.q = static_cast<Real>(fam["q"].get<double>());
                if (fam.contains("min")) spec.minPoints = fam["min"].get<long>();
                if (fam.contains("max")) spec.maxPoints = fam["max"].get<long>();
                cfg.families.push_back(spec);
            }
        }
        return cfg;
    }

    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
            return s;
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "trials")
            cfg.trials = std::strtol(value.c_str(), nullptr, 10);
        else if (key == "seed")
            cfg.seed = std::strtoull(value.c_str(), nullptr, 10);
        else if (key == "tol")
            cfg.tol = std::strtold(value.c_str(), nullptr);
        else if (key == "nabla")
            cfg.nabla = value == "1" || value == "true";
        else if (key == "non_strict")
            cfg.nonStrictOnly = value == "1" || value == "true";
        else if (key == "verbose")
            cfg.verbose = value == "1" || value == "true";
        else if (key == "scales") {
            std::size_t pos = 0;
            while (pos <= value.size()) {
                const auto comma = value.find(',', pos);
                const auto piece =
                    value.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
                if (!piece.empty()) cfg.families.push_back(parse_family_compact(piece));
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        } else if (!key.empty()) {
            raise(Errc::InvalidArgument, "unknown config key '" + key + "'");
        }
    }
    return cfg;
}

TimeScale scale_from_csv_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::CsvFormat, "cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) raise(Errc::CsvFormat, "empty input");
    std::vector<Real> pts;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        const std::string cell = comma == std::string::npos ? line : line.substr(0, comma);
        char* end = nullptr;
        const Real t = std::strtold(cell.c_str(), &end);
        if (end == cell.c_str())
            raise(Errc::CsvFormat, "bad point value '" + cell + "'");
        pts.push_back(t);
    }
    return TimeScale::finite(std::move(pts));
}

} // namespace

CliResult dispatch(const std::vector<std::string>& args) {
    CliResult result;

    Real defaultTol = 1e-10L;
    int defaultPrecision = 18;
    try {
        defaultTol = env_real("TS_TOL", defaultTol);
        defaultPrecision = env_int("TS_PRECISION", defaultPrecision);
    } catch (const Error& e) {
        result.err = std::string("error: ") + e.what() + "\n";
        result.exitCode = 2;
        return result;
    }

    CLI::App app{"time-scale monotonicity rules and q-series bounds"};
    app.require_subcommand(1);
    app.fallthrough(); // --format may appear after the subcommand

    std::string format = "table";
    app.add_option("--format", format, "output format: table|csv|json")->capture_default_str();

    // scale info
    auto* scaleCmd = app.add_subcommand("scale", "inspect a time scale");
    scaleCmd->require_subcommand(1);
    auto* infoCmd = scaleCmd->add_subcommand("info", "describe a scale and its jump operators");
    std::vector<std::string> scaleSpec;
    infoCmd->add_option("spec", scaleSpec, "scale description, e.g. 'qscale q=0.5 kmin=0 kmax=6'")
        ->required()
        ->expected(-1);

    // qexp
    auto* qexpCmd = app.add_subcommand("qexp", "evaluate the q-exponential series");
    Real qexpQ = 0, qexpX = 0;
    Real qexpTailTol = 1e-14L;
    int qexpPrecision = defaultPrecision;
    qexpCmd->add_option("--q", qexpQ, "base q in (0,1)")->required();
    qexpCmd->add_option("--x", qexpX, "evaluation point")->required();
    qexpCmd->add_option("--tail-tol", qexpTailTol, "series tail tolerance");
    qexpCmd->add_option("--precision", qexpPrecision, "decimal digits");

    // bounds
    auto* boundsCmd = app.add_subcommand("bounds", "lattice sandwich table for the series");
    Real boundsQ = 0, boundsTol = defaultTol, boundsTailTol = 1e-14L;
    long boundsAExp = 0, boundsBExp = 0;
    int boundsN = 1, boundsPrecision = defaultPrecision;
    std::vector<Real> boundsExtraXs;
    boundsCmd->add_option("--q", boundsQ, "base q in (0,1)")->required();
    boundsCmd->add_option("--a-exp", boundsAExp, "exponent of a = q^aExp")->required();
    boundsCmd->add_option("--b-exp", boundsBExp, "exponent of b = q^bExp")->required();
    boundsCmd->add_option("--n", boundsN, "bound order n >= 1")->required();
    boundsCmd->add_option("--tol", boundsTol, "margin tolerance");
    boundsCmd->add_option("--tail-tol", boundsTailTol, "series tail tolerance");
    boundsCmd->add_option("--precision", boundsPrecision, "decimal digits");
    boundsCmd->add_option("--extra-x", boundsExtraXs, "extra off-lattice abscissae");

    // verify {lhopital, chain}
    auto* verifyCmd = app.add_subcommand("verify", "randomized and ladder verification");
    verifyCmd->require_subcommand(1);

    auto* lhopCmd = verifyCmd->add_subcommand("lhopital", "randomized monotone-rule suite");
    long lhopTrials = 1000;
    std::uint64_t lhopSeed = 42;
    Real lhopTol = defaultTol;
    std::string lhopScale, lhopConfig;
    bool lhopNabla = false, lhopNonStrict = false, lhopVerbose = false;
    lhopCmd->add_option("--trials", lhopTrials, "number of trials");
    lhopCmd->add_option("--seed", lhopSeed, "master seed");
    lhopCmd->add_option("--tol", lhopTol, "comparison tolerance");
    lhopCmd->add_option("--scale", lhopScale, "pin every trial to this scale");
    lhopCmd->add_option("--config", lhopConfig, "config file (key=value or JSON)");
    lhopCmd->add_flag("--nabla", lhopNabla, "verify the backward rule (direct + reflected)");
    lhopCmd->add_flag("--non-strict", lhopNonStrict, "restrict to non-strict profiles");
    lhopCmd->add_flag("--verbose", lhopVerbose, "per-trial records in the report");

    auto* chainCmd = verifyCmd->add_subcommand("chain", "derivative ladder for one bound instance");
    Real chainQ = 0, chainTol = defaultTol, chainTailTol = 1e-14L;
    long chainAExp = 0, chainBExp = 0;
    int chainN = 1, chainPrecision = defaultPrecision;
    chainCmd->add_option("--q", chainQ, "base q in (0,1)")->required();
    chainCmd->add_option("--a-exp", chainAExp, "exponent of a = q^aExp")->required();
    chainCmd->add_option("--b-exp", chainBExp, "exponent of b = q^bExp")->required();
    chainCmd->add_option("--n", chainN, "ladder order n >= 1")->required();
    chainCmd->add_option("--tol", chainTol, "comparison tolerance");
    chainCmd->add_option("--tail-tol", chainTailTol, "series tail tolerance");
    chainCmd->add_option("--precision", chainPrecision, "decimal digits");

    // mvt
    auto* mvtCmd = app.add_subcommand("mvt", "mean value witnesses from CSV data");
    std::string mvtCsv, mvtScale;
    Real mvtX = 0, mvtA = 0;
    bool mvtHasA = false;
    mvtCmd->add_option("--csv", mvtCsv, "CSV file with header t,f,g")->required();
    mvtCmd->add_option("--x", mvtX, "right endpoint of the scan")->required();
    auto* mvtAOpt = mvtCmd->add_option("--a", mvtA, "anchor point (default: scale minimum)");
    mvtCmd->add_option("--scale", mvtScale, "scale description (default: the CSV t column)");

    try {
        std::vector<const char*> argv;
        argv.push_back("tscalc");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream out, err;
        const int code = app.exit(e, out, err);
        result.out = out.str();
        result.err = err.str();
        result.exitCode = code == 0 ? 0 : 2;
        return result;
    }

    try {
        const Format fmt = report::parse_format(format);

        if (*infoCmd) {
            const TimeScale ts = TimeScale::parse(join(scaleSpec));
            result.out = report::render(report::scale_info_json(ts, 17), fmt);
            return result;
        }

        if (*qexpCmd) {
            const QContext ctx(qexpQ, qexpPrecision, qexpTailTol);
            const QSeriesResult r = q_exponential(ctx, qexpX);
            result.out = report::render(report::qexp_json(ctx, qexpX, r, qexpPrecision), fmt);
            return result;
        }

        if (*boundsCmd) {
            const BoundProblem problem(QContext(boundsQ, boundsPrecision, boundsTailTol),
                                       boundsAExp, boundsBExp, boundsN);
            const BoundReport rep = sandwich_report(problem, boundsTol, boundsExtraXs);
            result.out =
                report::render(report::bound_report_json(problem, rep, boundsPrecision), fmt);
            result.exitCode = rep.allPassed ? 0 : 1;
            return result;
        }

        if (*lhopCmd) {
            SuiteConfig cfg;
            if (lhopCmd->count("--config")) cfg = parse_suite_config_file(lhopConfig);
            if (lhopCmd->count("--trials")) cfg.trials = lhopTrials;
            if (lhopCmd->count("--seed")) cfg.seed = lhopSeed;
            if (lhopCmd->count("--tol") || !lhopCmd->count("--config")) cfg.tol = lhopTol;
            if (lhopCmd->count("--nabla")) cfg.nabla = lhopNabla;
            if (lhopCmd->count("--non-strict")) cfg.nonStrictOnly = lhopNonStrict;
            if (lhopCmd->count("--verbose")) cfg.verbose = lhopVerbose;
            if (lhopCmd->count("--scale")) cfg.fixedScale = TimeScale::parse(lhopScale);
            if (cfg.trials < 0) raise(Errc::InvalidArgument, "trials must be >= 0");

            const SuiteReport rep = run_property_suite(cfg);
            result.out = report::render(report::suite_report_json(rep, 17), fmt);
            result.exitCode =
                (rep.violations + rep.mvtViolations + rep.dualityMismatches) == 0 ? 0 : 1;
            return result;
        }

        if (*chainCmd) {
            const BoundProblem problem(QContext(chainQ, chainPrecision, chainTailTol), chainAExp,
                                       chainBExp, chainN);
            const ChainReport rep = verify_derivative_chain(problem, chainTol);
            result.out =
                report::render(report::chain_report_json(problem, rep, chainPrecision), fmt);
            result.exitCode = rep.allPassed ? 0 : 1;
            return result;
        }

        if (*mvtCmd) {
            const TimeScale ts = mvtCmd->count("--scale") ? TimeScale::parse(mvtScale)
                                                          : scale_from_csv_points(mvtCsv);
            const CsvFunctions funcs = read_csv_file(mvtCsv, ts);
            if (!funcs.g)
                raise(Errc::CsvFormat, "witness scan needs the three-column header t,f,g");
            mvtHasA = mvtAOpt->count() > 0;
            const ScalePoint a = mvtHasA ? ts.point(mvtA) : ts.min_point();
            const ScalePoint x = ts.point(mvtX);
            const MvtWitnesses w = cauchy_mvt_witnesses(funcs.f, *funcs.g, a, x);
            const bool ok = w.lowerRatio <= w.middleRatio && w.middleRatio <= w.upperRatio;
            result.out = report::render(report::mvt_json(w, ok, 17), fmt);
            result.exitCode = ok ? 0 : 1;
            return result;
        }

        raise(Errc::InvalidArgument, "no command selected");
    } catch (const Error& e) {
        result.err = std::string("error: ") + e.what() + "\n";
        result.exitCode = 2;
        return result;
    } catch (const std::exception& e) {
        result.err = std::string("error: ") + e.what() + "\n";
        result.exitCode = 2;
        return result;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    const CliResult result = dispatch(args);
    std::cout << result.out;
    std::cerr << result.err;
    return result.exitCode;
}

} // namespace tsc::cli
