#include <catch_amalgamated.hpp>

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace qpol::cli;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "qpol");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> lines;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    return lines;
}

std::vector<double> numbers(const std::string& line) {
    std::vector<double> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) out.push_back(std::stod(cell));
    return out;
}

}  // namespace

TEST_CASE("parse_range and parse_reals") {
    const auto r = parse_range("--x", "0:1:0.25");
    REQUIRE(r.size() == 5);
    CHECK(r.back() == 1.0);
    CHECK(parse_range("--x", "0:10:0.1").size() == 101);
    CHECK(parse_range("--x", "2:2:1").size() == 1);
    CHECK(parse_reals("--x", "1,-2.5,3e-1") == std::vector<double>{1.0, -2.5, 0.3});
    CHECK_THROWS_AS(parse_range("--x", "0:1"), UsageError);
    CHECK_THROWS_AS(parse_range("--x", "1:0:0.1"), UsageError);
    CHECK_THROWS_AS(parse_range("--x", "0:1:0"), UsageError);
    CHECK_THROWS_WITH(parse_reals("--coherent", "2,x"), ContainsSubstring("column 3"));
    CHECK_THROWS_WITH(parse_reals("--coherent", "2,"), ContainsSubstring("column 3"));
}

TEST_CASE("format_number") {
    CHECK(format_number(4.0) == "4");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_number(M_PI)) == M_PI);
}

TEST_CASE("RunConfig validation") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    c.theta_nodes = 7;
    CHECK_THROWS_AS(c.validate(), UsageError);
    c = {};
    c.tolerance = 0.1;
    CHECK_THROWS_AS(c.validate(), UsageError);
}

TEST_CASE("stokes command") {
    const auto h = invoke({"stokes", "--coherent", "2,0"});
    REQUIRE(h.code == 0);
    const auto lines = data_lines(h.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "alpha_re,alpha_im,beta_re,beta_im,mean0,mean1,mean2,mean3,var0,var1,var2,var3");
    const auto v = numbers(lines[1]);
    CHECK(v[5] == 4.0);
    CHECK_THAT(v[9], WithinAbs(4.0, 1e-14));

    const auto vac = invoke({"stokes", "--coherent", "0,0"});
    for (double x : numbers(data_lines(vac.out)[1])) CHECK(x == 0.0);

    const auto sweep = invoke({"stokes", "--named", "psi1", "--alpha2-range", "0:10:0.1", "--beta2", "4", "--oracle"});
    REQUIRE(sweep.code == 0);
    const auto rows = data_lines(sweep.out);
    REQUIRE(rows.size() == 102);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto r = numbers(rows[i]);
        for (std::size_t k = r.size() - 8; k < r.size(); ++k) REQUIRE(r[k] < 1e-8);
    }
    CHECK_THAT(h.out, ContainsSubstring("# source=stokes_coherent"));

    const auto again = invoke({"stokes", "--named", "psi1", "--alpha2-range", "0:10:0.1", "--beta2", "4", "--oracle"});
    CHECK(again.out == sweep.out);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(invoke({"stokes", "--named", "psi9", "--alpha2", "1"}).code == kUsage);
    CHECK(invoke({"stokes", "--coherent", "1,2,3"}).code == kUsage);
    CHECK(invoke({"stokes"}).code == kUsage);
    CHECK(invoke({"nonsense"}).code == kUsage);
    CHECK(invoke({"dop", "--named", "psi2", "--alpha2", "1", "--beta2", "1"}).code == kUsage);
    CHECK(invoke({"stokes", "--coherent", "2,0", "--theta-nodes", "4"}).code == kUsage);
    const auto e = invoke({"stokes", "--coherent", "2,z"});
    CHECK(e.code == kUsage);
    CHECK_THAT(e.err, ContainsSubstring("column 3"));
    CHECK(invoke({"--help"}).code == kOk);
}

TEST_CASE("precondition failures exit with 2") {
    CHECK(invoke({"stokes", "--coherent", "3,0", "--oracle", "--cutoff", "5"}).code == kPrecondition);
}

TEST_CASE("qfunc command") {
    const auto vac = invoke({"qfunc", "--coherent", "0,0", "--theta-nodes", "9", "--phi-nodes", "17"});
    REQUIRE(vac.code == 0);
    const auto lines = data_lines(vac.out);
    CHECK(lines[0] == "theta,phi,q,x,y,z");
    REQUIRE(lines.size() == 1 + 9 * 17);
    for (std::size_t i = 1; i < lines.size(); ++i) REQUIRE_THAT(numbers(lines[i])[2], WithinAbs(1.0 / (4.0 * M_PI), 1e-16));

    const auto h = invoke({"qfunc", "--coherent", "2,0", "--oracle", "--theta-nodes", "9", "--phi-nodes", "17"});
    REQUIRE(h.code == 0);
    for (const auto& line : data_lines(h.out)) {
        if (line[0] == 't') continue;
        const auto r = numbers(line);
        REQUIRE_THAT(r[3], WithinAbs(r[2] * std::sin(r[0]) * std::cos(r[1]), 1e-15));
        REQUIRE(r[7] < 1e-9);
    }
    CHECK(invoke({"qfunc", "--named", "psi2", "--alpha2", "4"}).code == 0);
    CHECK(invoke({"qfunc", "--named", "psi3", "--alpha2-range", "0:1:0.5"}).code == kUsage);
}

TEST_CASE("dop command") {
    const auto vac = invoke({"dop", "--coherent", "0,0"});
    REQUIRE(vac.code == 0);
    const auto r = numbers(data_lines(vac.out)[1]);
    CHECK_THAT(r[6], WithinAbs(0.0, 1e-15));
    CHECK_THAT(r[7], WithinAbs(0.0, 1e-15));

    const auto hv = invoke({"dop", "--coherent-sweep", "hv", "--alpha2-range", "0:6:0.5"});
    REQUIRE(hv.code == 0);
    const auto lines = data_lines(hv.out);
    CHECK(lines[0] == "alpha2,theta_nodes,phi_nodes,D,P,P_analytic");
    REQUIRE(lines.size() == 14);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto v = numbers(lines[i]);
        REQUIRE_THAT(v[4], WithinAbs(v[5], 1e-6));
    }
    CHECK_THAT(hv.out, ContainsSubstring("# analytic=dop_h_analytic"));
}

TEST_CASE("concurrence command") {
    const auto zero = invoke({"concurrence", "--named", "psi1", "--alpha2", "1", "--beta2", "1"});
    REQUIRE(zero.code == 0);
    CHECK(numbers(data_lines(zero.out)[1]).back() == 0.0);

    const auto crc = invoke({"concurrence", "--crc", "--dist2", "4", "--phi1", "0,0.3926990817,0.7853981634",
                             "--theta-range", "0:1.5708:0.01"});
    REQUIRE(crc.code == 0);
    const auto lines = data_lines(crc.out);
    CHECK(lines[0] == "dist2,phi1,theta,C");
    CHECK(lines.size() == 1 + 3 * 158);

    const auto oracle = invoke({"concurrence", "--crc", "--dist2", "4", "--phi1", "0", "--theta", "0.7853981633974483",
                                "--oracle"});
    REQUIRE(oracle.code == 0);
    const auto v = numbers(data_lines(oracle.out)[1]);
    CHECK(v[3] < 1e-12);
    CHECK(v[4] < 1e-9);

    CHECK(invoke({"concurrence", "--crc", "--dist2", "4"}).code == kUsage);
}

TEST_CASE("amplitude command") {
    const auto h = invoke({"amplitude", "--coherent", "2,0", "--points", "5"});
    REQUIRE(h.code == 0);
    CHECK_THAT(h.out, ContainsSubstring("# means,2,0"));
    CHECK(data_lines(h.out).size() == 26);

    const auto d = invoke({"amplitude", "--coherent", "2,-2", "--points", "3", "--oracle"});
    REQUIRE(d.code == 0);
    CHECK_THAT(d.out, ContainsSubstring("# means,2,-2"));
    CHECK_THAT(d.out, ContainsSubstring("# oracle_means,"));

    const auto cat = invoke({"amplitude", "--named", "psi3", "--alpha2", "1"});
    CHECK(cat.code == kUsage);
    CHECK_THAT(cat.err, ContainsSubstring("product coherent states"));
}

TEST_CASE("json output") {
    const auto j = invoke({"stokes", "--coherent", "2,0", "--format", "json"});
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["meta"]["source"] == "stokes_coherent");
    CHECK(doc["meta"]["columns"].size() == 12);
    CHECK(doc["rows"][0][5] == 4.0);
}

TEST_CASE("verify sections") {
    const auto names = verify_sections();
    CHECK(std::find(names.begin(), names.end(), "arbitration") != names.end());
    const auto d = invoke({"verify", "--only", "disentangler,dop-analytic"});
    CHECK(d.code == 0);
    CHECK_THAT(d.out, ContainsSubstring("disentangler"));
    CHECK(invoke({"verify", "--only", "nope"}).code == kUsage);
}
