#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cwaves/config.hpp"
#include "cwaves/io.hpp"
#include "support/oracles.hpp"

using namespace cwaves;

namespace {

const char* sample_cfg = R"cfg(# Poschl-Teller resonant run
grid {
  L = 16
  M = 641
}
potential {
  V_inf = "0"
  V_0 = "-6*sech(x)^2"
  p = 2
  rho_declared = 0
}
nonlinearity {
  f = "0.5*exp(-x^2)*(arctan(u) + 0.3)"
  l_inf = "0"
  l_0 = "0.5*exp(-x^2)"
  r = 2
  m = "0.5*exp(-x^2)*(pi/2 + 0.3)"
}
lambda = -4
scenario = "resonant_plain"
solver {
  dt = 0.02
  seed = 777
  tail_track = [2, 4]
}
output_dir = "out"
)cfg";

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "cwaves_test_io";
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("config parse picks up every block") {
    auto c = RunConfig::parse(sample_cfg);
    CHECK(c.L == 16.0);
    CHECK(c.M == 641);
    CHECK(c.v_0_expr == "-6*sech(x)^2");
    CHECK(c.rho_declared.has_value());
    CHECK(c.lambda == -4.0);
    CHECK(c.scenario == "resonant_plain");
    CHECK(c.dt == 0.02);
    CHECK(c.seed == 777);
    REQUIRE(c.tail_track.size() == 2);
    CHECK(c.tail_track[1] == 4);
    CHECK(c.m_expr.has_value());

    auto grid = c.make_grid();
    CHECK(grid->points() == 641);
    auto V = c.make_potential();
    CHECK(V(0.0) == Catch::Approx(-6.0));
    auto f = c.make_nonlinearity();
    CHECK(f.f(0.0, 0.0) == Catch::Approx(0.15));
    CHECK((*f.m)(0.0) > 0.0);
}

TEST_CASE("config round-trip: parse after serialize is the identity") {
    auto c = RunConfig::parse(sample_cfg);
    const std::string s1 = c.serialize();
    auto c2 = RunConfig::parse(s1);
    const std::string s2 = c2.serialize();
    CHECK(s1 == s2);
    CHECK(c.config_hash() == c2.config_hash());

    // a config exercising the optional fields
    RunConfig full = c;
    full.a_inf_expr = "0";
    full.a_0_exprs = {"exp(-x^2)", "sech(x)^2"};
    full.a_0_ps = {2.0, 3.0};
    full.alpha_inf_expr = "-0.5";
    full.alpha_r = 2.0;
    full.omega_inf_expr = "0";
    full.omega_0_expr = "sech(x)";
    full.sweep_lambdas = {-4.5, -4.0, -0.5};
    full.fit_lo = 4.0;
    full.fit_hi = 10.0;
    const std::string t1 = full.serialize();
    CHECK(RunConfig::parse(t1).serialize() == t1);
}

TEST_CASE("config errors carry positions and reasons") {
    CHECK_THROWS_AS(RunConfig::parse("grid { L = }"), config_error);
    CHECK_THROWS_AS(RunConfig::parse("grid { L = 1 M = 9 } foo"), config_error);
    CHECK_THROWS_AS(RunConfig::parse(""), config_error); // missing grid
    CHECK_THROWS_AS(RunConfig::parse("grid { L = 1 M = 2 }"), config_error); // M < 3
    // malformed expression inside an otherwise fine config
    std::string bad = sample_cfg;
    const auto pos = bad.find("\"0.5*exp(-x^2)*(arctan(u) + 0.3)\"");
    bad.replace(pos, 3, "\"0.5*(");
    CHECK_THROWS_AS(RunConfig::parse(bad), config_error);
    // duplicate keys
    CHECK_THROWS_AS(RunConfig::parse("grid { L = 1 L = 2 M = 5 }"), config_error);
    try {
        RunConfig::parse("grid {\n  L = oops\n}");
        FAIL("expected throw");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
}

TEST_CASE("csv quoting follows RFC 4180") {
    CHECK(csv_quote("plain") == "plain");
    CHECK(csv_quote("with,comma") == "\"with,comma\"");
    CHECK(csv_quote("with\"quote") == "\"with\"\"quote\"");
    CHECK(csv_quote("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("float formatting round-trips through 17 significant digits") {
    for (double v : {1.0 / 3.0, 2.718281828459045, -1e-17, 6.02e23, 0.1}) {
        const std::string s = fmt17(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("snapshot round trip is bit exact") {
    auto dir = temp_dir();
    auto g = build_grid(7.0, 113);
    Field u = oracles::random_field(g, 42, 3.0);
    const auto path = dir / "field.cwf";
    write_snapshot(path, u);
    Field v = read_snapshot(path);
    REQUIRE(v.size() == u.size());
    CHECK(v.grid->half_length() == 7.0);
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(v[i] == u[i]);

    // corrupted magic is rejected
    {
        std::ofstream bad(dir / "bad.cwf", std::ios::binary);
        bad << "NOPE";
    }
    CHECK_THROWS_AS(read_snapshot(dir / "bad.cwf"), numerical_error);
}

TEST_CASE("fnv digest is stable") {
    CHECK(hex64(fnv1a64(std::string(""))) == "cbf29ce484222325");
    CHECK(hex64(fnv1a64(std::string("a"))) == "af63dc4c8601ec8c");
    const std::string payload = "conley-waves";
    CHECK(fnv1a64(payload) == fnv1a64(payload));
}
