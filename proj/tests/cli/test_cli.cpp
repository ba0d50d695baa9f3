#include <cmath>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

using namespace reslab;
using nlohmann::json;

namespace {

struct Result {
    int code;
    json report;
    std::string err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "reslab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    json j;
    if (!out.str().empty() && out.str()[0] == '{') j = json::parse(out.str());
    return {code, j, err.str()};
}

cplx c(const json& j) { return {j["re"].get<double>(), j["im"].get<double>()}; }

const cplx I(0, 1);

}  // namespace

TEST_CASE("parse_complex") {
    CHECK(cli::parse_complex("i") == I);
    CHECK(cli::parse_complex("-i") == -I);
    CHECK(cli::parse_complex("2") == cplx(2));
    CHECK(cli::parse_complex("0.5+1i") == cplx(0.5, 1));
    CHECK(cli::parse_complex("1e-3i") == cplx(0, 1e-3));
    CHECK(cli::parse_complex("0.5-2e-1i") == cplx(0.5, -0.2));
    CHECK(cli::parse_complex(" 1 - i ") == cplx(1, -1));
    CHECK_THROWS_AS(cli::parse_complex("1+x"), ConfigError);
    CHECK_THROWS_AS(cli::parse_complex(""), ConfigError);
}

TEST_CASE("curvature command") {
    auto r = call({"curvature", "--metric", "minkowski4", "--point", "0.1,0.2,0.3,0.4", "--point", "1,0,0,0"});
    REQUIRE(r.code == 0);
    CHECK(r.report["schema_version"] == cli::kSchemaVersion);
    REQUIRE(r.report["points"].size() == 2);
    for (const auto& p : r.report["points"]) CHECK(p["scalar"].get<double>() == 0.0);
    r = call({"curvature", "--metric", "desitter4", "--point", "0.3,0,0,0"});
    REQUIRE(r.code == 0);
    CHECK(std::abs(r.report["points"][0]["scalar"].get<double>() + 12) < 1e-12);
    r = call({"curvature", "--metric", "diag(1, -(1 + x0)"});
    CHECK(r.code == 1);
    CHECK(r.err.find("offset") != std::string::npos);
    CHECK(call({"curvature", "--metric", "minkowski4", "--mode", "euclidean"}).code == 1);
    CHECK(call({"curvature"}).code == 1);
    CHECK(call({"nonsense"}).code == 1);
}

TEST_CASE("hadamard command") {
    auto r = call({"hadamard", "--metric", "minkowski2", "--order", "2", "--point", "0.1,0.2"});
    REQUIRE(r.code == 0);
    const auto& d = r.report["points"][0]["diagonal"];
    REQUIRE(d.size() == 3);
    CHECK(d[0]["value"].get<double>() == 1.0);
    CHECK(std::abs(d[1]["value"].get<double>()) < 1e-6);
    CHECK(std::abs(d[2]["value"].get<double>()) < 1e-6);
    r = call({"hadamard", "--metric", "desitter4", "--order", "1", "--point", "0.1,0.2,0.3,0.4"});
    REQUIRE(r.code == 0);
    const auto& u1 = r.report["points"][0]["diagonal"][1];
    // R = -12 in this curvature convention, so u_1 = -R/6 = 2
    CHECK(std::abs(u1["value"].get<double>() - 2) <= std::max(u1["error"].get<double>(), 2e-3));
    r = call({"hadamard", "--metric", "minkowski2", "--order", "5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("cap") != std::string::npos);
}

TEST_CASE("residue command: analytic values") {
    auto r = call({"residue", "--metric", "minkowski4", "--alpha", "2,3", "--z", "i"});
    REQUIRE(r.code == 0);
    const auto& reps = r.report["reports"];
    REQUIRE(reps.size() == 2);
    CHECK(std::abs(c(reps[0]["analytic"]) - I / (8 * M_PI * M_PI)) < 1e-15);
    CHECK(c(reps[0]["zeta"]) == c(reps[0]["analytic"]) / 2.0);
    CHECK(c(reps[1]["analytic"]) == cplx(0));
    CHECK(reps[1]["note"].get<std::string>().find("out of residue range") != std::string::npos);
    CHECK_FALSE(reps[0].contains("numeric"));

    r = call({"residue", "--metric", "desitter4", "--point", "0.1,0.2,0.3,0.4", "--eps-schedule", "0.1,0.05"});
    REQUIRE(r.code == 0);
    const auto& ds = r.report["reports"];
    REQUIRE(ds.size() == 3);
    // eps -> 0: -i R / (48 pi^2) with R = -12
    const cplx want = -I * (-12.0) / (48 * M_PI * M_PI);
    CHECK(std::abs(c(ds[2]["analytic"]) - want) < 1e-3 * std::abs(want));
    CHECK(c(ds[0]["z"]) == cplx(0, 0.1));
    CHECK(call({"residue", "--metric", "sphere2", "--point", "1,0.3"}).code == 1);
}

TEST_CASE("residue command: numeric route and verify exit code") {
    auto r = call({"residue", "--metric", "minkowski2", "--point", "0.1,0.2", "--z", "i", "--verify"});
    const auto& rep = r.report["reports"][0];
    REQUIRE(rep.contains("numeric"));
    const cplx a = c(rep["analytic"]), n = c(rep["numeric"]);
    CHECK(std::abs(a - I / (2 * M_PI)) < 1e-12);
    CHECK(std::abs(std::abs(n) - std::abs(a)) < 1e-3 * std::abs(a));
    CHECK(rep["resonance_fits"].size() >= 1);
    const bool pass = rep["deltas"]["pass"].get<bool>();
    CHECK(r.code == (pass ? 0 : 2));
    r = call({"residue", "--metric", "minkowski2", "--alpha", "2", "--verify"});
    CHECK(r.code == 0);
    CHECK_FALSE(r.report["reports"][0].contains("numeric"));
}

TEST_CASE("verify command") {
    auto r = call({"verify", "gamma"});
    CHECK(r.code == 0);
    CHECK(r.report["result"]["pass"].get<bool>());
    CHECK(call({"verify", "normalform"}).code == 0);
    r = call({"verify", "no-such-suite"});
    CHECK(r.code == 1);
    CHECK(call({"verify"}).code == 1);
}

TEST_CASE("run file overrides flags and --out writes the report") {
    const std::string cfg = "/tmp/reslab_cli_test.cfg", out = "/tmp/reslab_cli_test.json";
    {
        std::ofstream f(cfg);
        f << "metric = \"desitter4\"\npoint = [0.2, 0, 0, 0]\nout = \"" << out << "\"\n";
    }
    const auto r = call({"curvature", "--metric", "minkowski4", "--config", cfg});
    REQUIRE(r.code == 0);
    std::ifstream f(out);
    const json j = json::parse(f);
    CHECK(j["metric"]["name"] == "desitter4");
    CHECK(j["schema_version"] == cli::kSchemaVersion);
    {
        std::ofstream g(cfg);
        g << "metric = \"minkowski4\"\nbogus = 1\n";
    }
    CHECK(call({"curvature", "--config", cfg}).code == 1);
}
