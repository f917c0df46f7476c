#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsc/cli.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

using tsc::cli::CliResult;
using tsc::cli::dispatch;

namespace {

struct BinaryResult {
    int exitCode = -1;
    std::string out;
};

BinaryResult run_binary(const std::string& args) {
    const char* bin = std::getenv("TSCALC_BIN");
    REQUIRE(bin != nullptr);
    const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    BinaryResult r;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = std::string("/tmp/tscalc_test_") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("qexp command") {
    auto ok = dispatch({"qexp", "--q", "0.5", "--x", "0"});
    CHECK(ok.exitCode == 0);
    CHECK(ok.out.find("value: 1\n") != std::string::npos);
    CHECK(ok.out.find("terms_used: 1") != std::string::npos);

    auto diverged = dispatch({"qexp", "--q", "0.5", "--x", "2"});
    CHECK(diverged.exitCode == 2);
    CHECK(diverged.err.find("OutsideRadiusOfConvergence") != std::string::npos);
}

TEST_CASE("bounds command emits the pinned CSV schema") {
    auto r = dispatch({"--format", "csv", "bounds", "--q", "0.5", "--a-exp", "4", "--b-exp", "0",
                       "--n", "2"});
    CHECK(r.exitCode == 0);
    REQUIRE(!r.out.empty());
    const auto firstLine = r.out.substr(0, r.out.find('\n'));
    CHECK(firstLine == "x,lower,exact,upper,lower_margin,upper_margin");
    int lines = 0;
    for (char c : r.out)
        if (c == '\n') ++lines;
    CHECK(lines == 5); // header + q^3..q^0

    auto j = dispatch({"--format", "json", "bounds", "--q", "0.5", "--a-exp", "4", "--b-exp", "0",
                       "--n", "2"});
    CHECK(j.exitCode == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["all_passed"].get<bool>());
    CHECK(doc["rows"].size() == 4);
    CHECK(doc["n"].get<int>() == 2);

    auto bad = dispatch({"bounds", "--q", "0.5", "--a-exp", "0", "--b-exp", "4", "--n", "2"});
    CHECK(bad.exitCode == 2);
}

TEST_CASE("scale info command") {
    auto r = dispatch({"scale", "info", "qscale", "q=0.5", "kmin=0", "kmax=3"});
    CHECK(r.exitCode == 0);
    CHECK(r.out.find("family: qscale") != std::string::npos);
    CHECK(r.out.find("points: 4") != std::string::npos);

    auto bad = dispatch({"scale", "info", "pyramid", "q=1"});
    CHECK(bad.exitCode == 2);
}

TEST_CASE("verify lhopital command") {
    auto r = dispatch({"--format", "json", "verify", "lhopital", "--trials", "40", "--seed",
                       "11"});
    CHECK(r.exitCode == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["counts"]["violations"].get<long>() == 0);
    CHECK(doc["trials"].get<long>() == 40);

    auto again = dispatch({"--format", "json", "verify", "lhopital", "--trials", "40", "--seed",
                           "11"});
    CHECK(again.out == r.out);

    auto nabla = dispatch({"--format", "json", "verify", "lhopital", "--trials", "24", "--seed",
                           "3", "--nabla"});
    CHECK(nabla.exitCode == 0);
    const auto ndoc = nlohmann::json::parse(nabla.out);
    CHECK(ndoc["mode"].get<std::string>() == "nabla");
    CHECK(ndoc["counts"]["duality_mismatches"].get<long>() == 0);

    auto pinned = dispatch({"--format", "json", "verify", "lhopital", "--trials", "12", "--seed",
                            "5", "--scale", "lattice origin=0 step=1 count=12"});
    CHECK(pinned.exitCode == 0);
}

TEST_CASE("verify lhopital with a config file") {
    const auto path = write_temp("suite.cfg", "trials=16\nseed=9\n# comment\ntol=1e-10\n"
                                              "scales=lattice:5-20,qscale@0.5:4-10\n");
    auto r = dispatch({"--format", "json", "verify", "lhopital", "--config", path});
    CHECK(r.exitCode == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["trials"].get<long>() == 16);
    CHECK(doc["seed"].get<long>() == 9);

    // explicit flags override the file
    auto over = dispatch({"--format", "json", "verify", "lhopital", "--config", path, "--trials",
                          "8"});
    CHECK(nlohmann::json::parse(over.out)["trials"].get<long>() == 8);

    const auto jsonPath = write_temp("suite.json", R"({"trials": 12, "seed": 4,
        "scales": [{"kind": "qscale", "q": 0.9, "min": 5, "max": 10}]})");
    auto fromJson = dispatch({"--format", "json", "verify", "lhopital", "--config", jsonPath});
    CHECK(fromJson.exitCode == 0);
    CHECK(nlohmann::json::parse(fromJson.out)["trials"].get<long>() == 12);

    auto missing = dispatch({"verify", "lhopital", "--config", "/tmp/does_not_exist.cfg"});
    CHECK(missing.exitCode == 2);
}

TEST_CASE("verify chain command") {
    auto r = dispatch({"--format", "json", "verify", "chain", "--q", "0.5", "--a-exp", "3",
                       "--b-exp", "0", "--n", "2"});
    CHECK(r.exitCode == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["all_passed"].get<bool>());
    CHECK(doc["rows"].size() == 3);
}

TEST_CASE("mvt command") {
    const auto good = write_temp("mvt_good.csv", "t,f,g\n0,0,0\n1,1,1\n2,4,2\n4,16,4\n");
    auto r = dispatch({"--format", "json", "mvt", "--csv", good, "--x", "4"});
    CHECK(r.exitCode == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["sandwich_ok"].get<bool>());
    CHECK(doc["c1"].get<std::string>() == "0");
    CHECK(doc["c2"].get<std::string>() == "2");
    CHECK(doc["middle_ratio"].get<std::string>() == "4");

    // tampered data: the denominator increments change sign
    const auto tampered = write_temp("mvt_bad.csv", "t,f,g\n0,0,0\n1,1,1\n2,4,0.5\n4,16,4\n");
    auto bad = dispatch({"mvt", "--csv", tampered, "--x", "4"});
    CHECK(bad.exitCode == 2);
    CHECK(bad.err.find("SignConditionViolated") != std::string::npos);

    auto noG = write_temp("mvt_nog.csv", "t,f\n0,0\n1,1\n");
    CHECK(dispatch({"mvt", "--csv", noG, "--x", "1"}).exitCode == 2);
}

TEST_CASE("usage errors and help") {
    CHECK(dispatch({}).exitCode == 2);
    CHECK(dispatch({"qexp"}).exitCode == 2);                      // missing required flags
    CHECK(dispatch({"qexp", "--q", "0.5"}).exitCode == 2);        // missing --x
    CHECK(dispatch({"unknown-command"}).exitCode == 2);
    CHECK(dispatch({"--format", "yaml", "qexp", "--q", "0.5", "--x", "0"}).exitCode == 2);
    auto help = dispatch({"--help"});
    CHECK(help.exitCode == 0);
    CHECK(!help.out.empty());
}

TEST_CASE("environment defaults") {
    setenv("TS_TOL", "0.5", 1);
    auto r = dispatch({"--format", "json", "verify", "lhopital", "--trials", "4", "--seed", "1"});
    unsetenv("TS_TOL");
    CHECK(r.exitCode == 0);
    CHECK(nlohmann::json::parse(r.out)["tol"].get<std::string>() == "0.5");

    setenv("TS_PRECISION", "20", 1);
    auto q = dispatch({"--format", "json", "qexp", "--q", "0.5", "--x", "1"});
    unsetenv("TS_PRECISION");
    CHECK(nlohmann::json::parse(q.out)["precision"].get<int>() == 20);

    setenv("TS_TOL", "not-a-number", 1);
    auto bad = dispatch({"qexp", "--q", "0.5", "--x", "0"});
    unsetenv("TS_TOL");
    CHECK(bad.exitCode == 2);
}

TEST_CASE("binary runs match dispatch byte for byte") {
    auto inProcess = dispatch({"--format", "json", "verify", "lhopital", "--trials", "20",
                               "--seed", "7"});
    auto fromBinary = run_binary("--format json verify lhopital --trials 20 --seed 7");
    CHECK(fromBinary.exitCode == 0);
    CHECK(fromBinary.out == inProcess.out);
}
