#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padicwf/cli.hpp"
#include "padicwf/scene_io.hpp"
#include "padicwf/toml_subset.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace padicwf;
using nlohmann::json;

namespace {

const std::string kData = PADICWF_TEST_DATA;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

ErrorKind toml_error(const std::string& text)
{
    try {
        parse_toml_subset(text);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error for: " << text);
    return ErrorKind::InvalidArgument;
}

json minimal()
{
    return json::parse(R"({"format_version": 1, "prime": 5, "max_level": 8,
                           "scene": {"kind": "polynomial", "n": 1, "d": 1, "phi": ["y^2"]}})");
}

bool rejected(const json& j)
{
    try {
        scene_from_json(j);
    } catch (const Error& e) {
        return e.kind() == ErrorKind::Parse;
    }
    return false;
}

}  // namespace

TEST_CASE("toml subset reader")
{
    const auto j = parse_toml_subset(R"(
# comment
a = 1_000
b = "x\ty"   # trailing
c = 'lit\eral'
d = [1, 2,
     3,]
e = { f = true, g = "h" }
x.y = -4

[t]
k = [["1/2", "3"], []]

[[arr]]
id = "p"
[[arr]]
id = "q"
[arr.sub]
z = 0
)");
    CHECK(j["a"] == 1000);
    CHECK(j["b"] == "x\ty");
    CHECK(j["c"] == "lit\\eral");
    CHECK(j["d"] == json::array({1, 2, 3}));
    CHECK(j["e"]["f"] == true);
    CHECK(j["x"]["y"] == -4);
    CHECK(j["t"]["k"][0][0] == "1/2");
    REQUIRE(j["arr"].size() == 2);
    CHECK(j["arr"][1]["id"] == "q");
    CHECK(j["arr"][1]["sub"]["z"] == 0);

    CHECK(toml_error("a = 1.5") == ErrorKind::Parse);
    CHECK(toml_error("a = 1e3") == ErrorKind::Parse);
    CHECK(toml_error("a = inf") == ErrorKind::Parse);
    CHECK(toml_error("a = 2024-01-01") == ErrorKind::Parse);
    CHECK(toml_error("a = 1\na = 2") == ErrorKind::Parse);
    CHECK(toml_error("[t]\n[t]") == ErrorKind::Parse);
    CHECK(toml_error("a = \"\"\"x\"\"\"") == ErrorKind::Parse);
    CHECK(toml_error("a = \"open") == ErrorKind::Parse);
    CHECK(toml_error("a = 1 b = 2") == ErrorKind::Parse);
}

TEST_CASE("scene schema strictness")
{
    CHECK_FALSE(rejected(minimal()));

    auto j = minimal();
    j["format_version"] = 2;
    CHECK(rejected(j));
    j = minimal();
    j["prime"] = 9;
    CHECK(rejected(j));
    j = minimal();
    j["extra"] = 1;
    CHECK(rejected(j));
    j = minimal();
    j["scene"]["r"] = json::array({0.5});
    CHECK(rejected(j));
    j = minimal();
    j["max_level"] = 8.0;
    CHECK(rejected(j));
    j = minimal();
    j.erase("max_level");
    CHECK(rejected(j));
    j = minimal();
    j["scene"]["phi"] = json::array({"y^2 + z"});
    CHECK(rejected(j));
    j = minimal();
    j["probes"] = json::parse(R"([{"id": "a", "xi": ["1/3"], "cube": "1:7,2"}])");
    CHECK(rejected(j));
    j["probes"] = json::parse(R"([{"id": "a", "xi": ["1/3"], "cube": "1:2", "colour": 1}])");
    CHECK(rejected(j));
    j["probes"] = json::parse(R"([{"id": "a", "xi": ["1/0"]}])");
    CHECK(rejected(j));
    j["probes"] = json::parse(R"([{"id": "a", "xi": ["1/3"], "cube": "1:2"}])");
    CHECK_FALSE(rejected(j));

    // Exact rationals may be given as integers or "a/b" strings.
    const auto f = scene_from_json(j);
    REQUIRE(f.probes.size() == 1);
    CHECK(f.probes[0].xi[0] == Rational(1, 3));
    CHECK(f.probes[0].cube.level() == 1);
    CHECK(f.probes[0].cube.base()[0] == 2);

    // The same scene through both front ends.
    const auto a = load_scene_file(kData + "/square.json");
    const auto b = load_scene_file(kData + "/square.toml");
    REQUIRE(a.bound.has_value());
    REQUIRE(b.bound.has_value());
    CHECK(build_L(a.bound->charts, 1, 0) == build_L(b.bound->charts, 1, 0));
    REQUIRE(a.probes.size() == b.probes.size());
    for (std::size_t i = 0; i < a.probes.size(); ++i) {
        CHECK(a.probes[i].id == b.probes[i].id);
        CHECK(a.probes[i].xi == b.probes[i].xi);
    }
}

TEST_CASE("cube and rational list parsing")
{
    const PrimeContext ctx(3, 6);
    CHECK(parse_cube("0", 2, ctx).level() == 0);
    CHECK(parse_cube("2:4,8", 2, ctx).base() == std::vector<std::int64_t>{4, 8});
    CHECK_THROWS_AS(parse_cube("2:4", 2, ctx), Error);
    CHECK_THROWS_AS(parse_cube("x", 1, ctx), Error);
    CHECK_THROWS_AS(parse_cube("1:3", 1, ctx), Error);
    CHECK(parse_rational_list("1/2, -3") == RationalVector{Rational(1, 2), Rational(-3)});
    CHECK_THROWS_AS(parse_rational_list("0.5"), Error);
}

TEST_CASE("exit codes")
{
    CHECK(run({"bound", kData + "/x_inverse_chart.json"}).code == kExitOk);
    CHECK(run({"--help"}).code == kExitOk);
    CHECK(run({}).code == kExitParse);
    CHECK(run({"frobnicate"}).code == kExitParse);
    CHECK(run({"bound", kData + "/missing.json"}).code == kExitParse);
    CHECK(run({"bound", kData + "/float_rejected.json"}).code == kExitParse);
    CHECK(run({"bound", kData + "/unknown_key.json"}).code == kExitParse);
    CHECK(run({"verify", kData + "/inverse.json", "--suite", "nonsense"}).code == kExitParse);
    // A charts scene cannot be evaluated.
    CHECK(run({"eval", kData + "/x_inverse_chart.json", "--xi", "1"}).code == kExitEval);
    // A malformed frequency.
    CHECK(run({"eval", kData + "/cubic.json", "--xi", "1/0"}).code == kExitParse);

    const auto bad = run({"probe", kData + "/shifted_square.json"});
    CHECK(bad.code == kExitAssertion);
    // The report is flushed before the failing exit.
    const auto report = json::parse(bad.out);
    CHECK(report["passed"] == false);
    CHECK(report["violations"][0]["probe_id"] == "origin");
}

TEST_CASE("output resolution and csv")
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "padicwf_cli_test";
    fs::remove_all(dir);
    ::setenv(kOutputDirVariable, dir.c_str(), 1);

    // The scene's own output path is relative, so it lands under the directory.
    const auto r = run({"probe", kData + "/cubic.json"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.empty());
    std::ifstream in(dir / "cubic_probe.csv");
    REQUIRE(in.good());
    std::string header, line;
    std::getline(in, header);
    CHECK(header == "probe_id,level,value_re,value_im,exact_zero");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 4);
    }
    CHECK(rows == 4 + 3);

    // -o overrides, and "-" is stdout.
    const auto s = run({"probe", kData + "/cubic.json", "-o", "-", "--format", "json"});
    REQUIRE(s.code == kExitOk);
    CHECK(json::parse(s.out)["probes"].size() == 2);
    REQUIRE(run({"bound", kData + "/square.json", "-o", "nested/l.json"}).code == kExitOk);
    CHECK(fs::exists(dir / "nested" / "l.json"));

    ::unsetenv(kOutputDirVariable);
    fs::remove_all(dir);
}

TEST_CASE("round trip of the bound through the descriptor reader")
{
    for (const char* name : {"x_inverse_chart.json", "x_inverse_chart_q1.json", "no_pole_chart.json", "square.json"}) {
        const auto r = run({"bound", kData + "/" + name});
        REQUIRE(r.code == kExitOk);
        const auto L = descriptor_from_json(json::parse(r.out));
        CHECK(to_json(L).dump(2) + "\n" == r.out);
        CHECK(isotropic_check(L));
        CHECK(is_conic(L));
    }
}

TEST_CASE("pcrit and verify through the command line")
{
    auto eq = [](const std::string& file) {
        const auto r = run({"pcrit", kData + "/" + file});
        REQUIRE(r.code == kExitOk);
        return json::parse(r.out)["equations"];
    };
    CHECK(eq("parabola.json") == json::array({"4*l0*l2 - l1^2"}));
    CHECK(eq("point.json") == json::array({"2*l0 - l1 + 3*l2"}));
    CHECK(eq("line.json") == json::array({"l1"}));
    CHECK(run({"pcrit", kData + "/square.json"}).code == kExitParse);

    for (const char* suite : {"homogeneity", "floor"}) {
        const auto r = run({"verify", kData + "/inverse.json", "--suite", suite, "--trials", "20", "--seed", "3"});
        CHECK(r.code == kExitOk);
        CHECK(json::parse(r.out)["passed"] == true);
    }
    const auto o = run({"verify", kData + "/cubic.json", "--suite", "oracle", "--trials", "20", "-o", "-"});
    CHECK(o.code == kExitOk);
    const auto c = run({"verify", kData + "/square.json", "--suite", "coverage"});
    CHECK(c.code == kExitOk);
    CHECK(run({"verify", kData + "/shifted_square.json", "--suite", "coverage"}).code == kExitAssertion);
    // Deterministic for a fixed seed.
    CHECK(run({"verify", kData + "/inverse.json", "--suite", "homogeneity", "--trials", "15"}).out ==
          run({"verify", kData + "/inverse.json", "--suite", "homogeneity", "--trials", "15"}).out);
}
