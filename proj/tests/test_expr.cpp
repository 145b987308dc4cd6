#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cwaves/expr.hpp"

using namespace cwaves;

TEST_CASE("expression evaluation") {
    expr e("2*x + u^2 - 1");
    CHECK(e(3.0, 2.0) == Catch::Approx(2 * 3 + 4 - 1));
    CHECK(expr("exp(-x^2)")(1.0) == Catch::Approx(std::exp(-1.0)));
    CHECK(expr("sech(x)")(0.7) == Catch::Approx(1.0 / std::cosh(0.7)));
    CHECK(expr("arctan(u)")(0.0, 10.0) == Catch::Approx(std::atan(10.0)));
    CHECK(expr("atan(u)")(0.0, -2.0) == Catch::Approx(std::atan(-2.0)));
    CHECK(expr("tanh(3*u)/(1+x^2)")(2.0, 0.1) ==
          Catch::Approx(std::tanh(0.3) / 5.0));
    CHECK(expr("pi")(0.0) == Catch::Approx(3.14159265358979));
    CHECK(expr("-x^2")(2.0) == Catch::Approx(-4.0)); // unary minus binds the power
    CHECK(expr("2^3^2")(0.0) == Catch::Approx(512.0)); // right associative
    CHECK(expr("1e-3 + 2.5e2")(0.0) == Catch::Approx(250.001));
}

TEST_CASE("expression parse errors carry position") {
    CHECK_THROWS_AS(expr("2 +"), config_error);
    CHECK_THROWS_AS(expr("foo(x)"), config_error);
    CHECK_THROWS_AS(expr("exp x"), config_error);
    CHECK_THROWS_AS(expr("(1+2"), config_error);
    CHECK_THROWS_AS(expr("1 2"), config_error);
    try {
        expr("x + @");
        FAIL("expected throw");
    } catch (const config_error& e) {
        CHECK(e.col() > 1);
    }
}

TEST_CASE("u dependence detection") {
    CHECK(expr("exp(-x^2)*u").depends_on_u());
    CHECK_FALSE(expr("exp(-x^2) + x^3").depends_on_u());
}

TEST_CASE("closed-form primitives in u") {
    // linear: g(x) u -> g(x) v^2/2
    expr lin("3*exp(-x^2)*u");
    auto p = lin.primitive(1.0, 2.0);
    REQUIRE(p.has_value());
    CHECK(*p == Catch::Approx(3.0 * std::exp(-1.0) * 2.0));

    // constant in u: c(x) -> c(x) v
    expr c("exp(-x^2)");
    p = c.primitive(0.5, 3.0);
    REQUIRE(p.has_value());
    CHECK(*p == Catch::Approx(std::exp(-0.25) * 3.0));

    // cubic term
    expr cub("u^3");
    p = cub.primitive(0.0, 2.0);
    REQUIRE(p.has_value());
    CHECK(*p == Catch::Approx(4.0));

    // arctan: v atan v - log(1+v^2)/2
    expr at("2*arctan(u)");
    p = at.primitive(0.0, 1.5);
    REQUIRE(p.has_value());
    CHECK(*p == Catch::Approx(2.0 * (1.5 * std::atan(1.5) - 0.5 * std::log(1.0 + 2.25))));

    // distributed sum with an x-dependent prefactor
    expr mix("exp(-x^2)*(u - u^3)");
    p = mix.primitive(1.0, 2.0);
    REQUIRE(p.has_value());
    CHECK(*p == Catch::Approx(std::exp(-1.0) * (2.0 - 4.0)));

    // saturating rational shape has no closed form here
    expr rat("u/(1+u^2)");
    CHECK_FALSE(rat.primitive(0.0, 1.0).has_value());
}
